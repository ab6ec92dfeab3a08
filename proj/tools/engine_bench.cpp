// Compares serial and parallel fixpoint evaluation on the bench scenario
// and checks they derive the same triples.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qosflow/bench.hpp"

int main(int argc, char** argv) {
	CLI::App app{"serial vs parallel rule engine comparison"};
	std::size_t devices = 100;
	std::size_t constraints = 500;
	std::size_t runs = 3;
	std::uint64_t seed = 42;
	app.add_option("--devices", devices, "camera device count");
	app.add_option("--constraints", constraints, "constraint count");
	app.add_option("--runs", runs, "timed runs per mode");
	app.add_option("--seed", seed, "scenario seed");
	CLI11_PARSE(app, argc, argv);

	qosflow::BenchScenario sc;
	sc.deviceCount = devices;
	sc.constraintCount = constraints;
	sc.runs = runs;
	sc.seed = seed;

	qosflow::FixpointOptions serial;
	serial.mode = qosflow::EvalMode::Serial;
	qosflow::FixpointOptions parallel;
	parallel.mode = qosflow::EvalMode::Parallel;

	std::printf("scenario: %zu devices, %zu constraints, %zu runs\n", devices, constraints, runs);
	qosflow::BenchResult serialResult =
		qosflow::runBench(sc, qosflow::EngineChoice::Rules, serial);
	std::printf("serial:   median %.1f ms, %zu derived triples\n", serialResult.medianMs(),
		serialResult.derivedTriples());
	qosflow::BenchResult parallelResult =
		qosflow::runBench(sc, qosflow::EngineChoice::Rules, parallel);
	std::printf("parallel: median %.1f ms, %zu derived triples\n", parallelResult.medianMs(),
		parallelResult.derivedTriples());

	for (const qosflow::BenchRun& r : serialResult.runs) {
		if (r.derivedTriples != serialResult.derivedTriples()) {
			std::fprintf(stderr, "serial runs disagree on derived count\n");
			return 1;
		}
	}
	for (const qosflow::BenchRun& r : parallelResult.runs) {
		if (r.derivedTriples != parallelResult.derivedTriples()) {
			std::fprintf(stderr, "parallel runs disagree on derived count\n");
			return 1;
		}
	}
	if (serialResult.derivedTriples() != parallelResult.derivedTriples()) {
		std::fprintf(stderr, "modes disagree: serial %zu vs parallel %zu\n",
			serialResult.derivedTriples(), parallelResult.derivedTriples());
		return 1;
	}
	std::printf("modes agree on derivations\n");
	return 0;
}
