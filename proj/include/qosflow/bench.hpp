#ifndef QOSFLOW_BENCH_HPP
#define QOSFLOW_BENCH_HPP

#include <cstdint>
#include <ostream>
#include <vector>

#include "qosflow/store.hpp"
#include "qosflow/translator.hpp"

namespace qosflow {

// Scaling scenario: N camera devices, M frame-rate constraints spread
// round-robin over them, all streaming to one collector.
struct BenchScenario {
	std::size_t deviceCount = 100;
	std::size_t constraintCount = 500;
	std::size_t runs = 5;
	std::uint64_t seed = 42;
};

struct BenchRun {
	double elapsedMs = 0.0;
	std::size_t derivedTriples = 0;
	std::size_t iterations = 0;
};

struct BenchResult {
	std::vector<BenchRun> runs;  // warm-up excluded
	double medianMs() const;
	// Derived count shared by all runs; the harness asserts they agree.
	std::size_t derivedTriples() const;
};

// Deterministic under seed: same scenario, same triples.
Store generateScenario(const BenchScenario& sc);

// `runs` timed repetitions (after one untimed warm-up), each on a fresh
// store: load packs, run the translation to fixpoint, record wall time.
BenchResult runBench(const BenchScenario& sc, EngineChoice engine = EngineChoice::Rules,
	const FixpointOptions& opts = {});

// CSV with header devices,constraints,run,elapsedMs,derivedTriples.
void writeCsv(std::ostream& out, const BenchScenario& sc, const BenchResult& result);

// Constraint-count sweep at fixed device count; returns (M, median ms).
std::vector<std::pair<std::size_t, double>> benchSweep(const std::vector<std::size_t>& counts,
	const BenchScenario& base, EngineChoice engine = EngineChoice::Rules);

// gnuplot-friendly two-column data of the sweep curve.
void writeSweepData(std::ostream& out, const std::vector<std::pair<std::size_t, double>>& curve);

}  // namespace qosflow

#endif  // QOSFLOW_BENCH_HPP
