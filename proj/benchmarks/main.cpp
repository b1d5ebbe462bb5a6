#include <benchmark/benchmark.h>

// The distro benchmark_main archive is LTO bytecode from another compiler
// version, so the entry point lives here instead.
BENCHMARK_MAIN();
