#include "qosflow/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "qosflow/vocab.hpp"

namespace qosflow {

namespace {

const std::string kBench = "http://qosflow.dev/bench#";

Term bench(const std::string& local) { return Term::iri(kBench + local); }

Term decimal2(int hundredths) {
	// e.g. 95 -> "0.95"
	std::string out = "0.";
	out += static_cast<char>('0' + hundredths / 10);
	out += static_cast<char>('0' + hundredths % 10);
	return Term::literal(out, std::string(xsd::kDecimal));
}

}  // namespace

Store generateScenario(const BenchScenario& sc) {
	std::mt19937_64 rng(sc.seed);
	std::uniform_int_distribution<int> pickRes(0, 3);
	std::uniform_int_distribution<int> pickFps(0, 3);
	std::uniform_int_distribution<int> pickEff(90, 99);
	std::uniform_int_distribution<int> pickOctet(1, 254);
	static const int kRes[4][2] = {{1280, 720}, {1920, 1080}, {2560, 1440}, {3840, 2160}};
	static const int kFps[4] = {15, 24, 30, 60};

	const Term rdfType = vocab::rdfType();
	std::vector<Triple> triples;
	auto add = [&triples](const Term& s, const Term& p, const Term& o) {
		triples.push_back(Triple{s, p, o});
	};

	Term collectorDev = bench("collectorDevice");
	Term collector = bench("collector");
	add(collectorDev, rdfType, vocab::rcp("Device"));
	add(collectorDev, vocab::rcp("offers"), collector);
	add(collectorDev, vocab::rcp("deviceAddress"), Term::str("10.255.0.1"));
	add(collector, rdfType, vocab::rcp("Offering"));

	std::vector<Term> offerings;
	offerings.reserve(sc.deviceCount);
	for (std::size_t i = 0; i < sc.deviceCount; ++i) {
		Term dev = bench("camera" + std::to_string(i));
		Term off = bench("cameraFeed" + std::to_string(i));
		const int* res = kRes[pickRes(rng)];
		int eff = pickEff(rng);
		std::string addr = "10." + std::to_string(pickOctet(rng)) + "." +
			std::to_string(pickOctet(rng)) + "." + std::to_string(pickOctet(rng));
		add(dev, rdfType, vocab::rcp("Device"));
		add(dev, vocab::rcp("offers"), off);
		add(dev, vocab::rcp("deviceAddress"), Term::str(addr));
		add(dev, vocab::app("resolutionX"), Term::integer(res[0]));
		add(dev, vocab::app("resolutionY"), Term::integer(res[1]));
		add(dev, vocab::app("videoEfficiency"), decimal2(eff));
		add(off, rdfType, vocab::rcp("Offering"));
		offerings.push_back(off);
	}

	Term recipe = bench("recipe");
	add(recipe, rdfType, vocab::rcp("Recipe"));
	for (std::size_t j = 0; j < sc.constraintCount; ++j) {
		Term interaction = bench("interaction" + std::to_string(j));
		Term constraint = bench("constraint" + std::to_string(j));
		add(recipe, vocab::rcp("hasInteraction"), interaction);
		add(interaction, rdfType, vocab::rcp("Interaction"));
		add(interaction, vocab::rcp("hasConstraint"), constraint);
		add(constraint, rdfType, vocab::app("VideoQualityConstraint"));
		add(constraint, vocab::app("framesPerSecond"), Term::integer(kFps[pickFps(rng)]));
		add(constraint, vocab::rcp("interactionFrom"), offerings[j % sc.deviceCount]);
		add(constraint, vocab::rcp("interactionTo"), collector);
	}

	Store store;
	store.insertBatch(triples);
	return store;
}

BenchResult runBench(const BenchScenario& sc, EngineChoice engine, const FixpointOptions& opts) {
	Translator translator = Translator::fromPacks({"calculation-core", "camera-framerate"});
	BenchResult result;
	for (std::size_t run = 0; run <= sc.runs; ++run) {
		Store store = generateScenario(sc);
		auto start = std::chrono::steady_clock::now();
		TranslationReport report = translator.translate(store, engine, {}, opts);
		auto stop = std::chrono::steady_clock::now();
		if (run == 0) continue;  // warm-up
		BenchRun row;
		row.elapsedMs = std::chrono::duration<double, std::milli>(stop - start).count();
		row.derivedTriples = report.newTriples;
		row.iterations = report.fixpoint.iterations;
		result.runs.push_back(row);
	}
	return result;
}

double BenchResult::medianMs() const {
	if (runs.empty()) return 0.0;
	std::vector<double> times;
	times.reserve(runs.size());
	for (const BenchRun& r : runs) times.push_back(r.elapsedMs);
	std::sort(times.begin(), times.end());
	std::size_t mid = times.size() / 2;
	if (times.size() % 2 == 1) return times[mid];
	return (times[mid - 1] + times[mid]) / 2.0;
}

std::size_t BenchResult::derivedTriples() const {
	return runs.empty() ? 0 : runs.front().derivedTriples;
}

void writeCsv(std::ostream& out, const BenchScenario& sc, const BenchResult& result) {
	out << "devices,constraints,run,elapsedMs,derivedTriples\n";
	for (std::size_t i = 0; i < result.runs.size(); ++i) {
		const BenchRun& r = result.runs[i];
		out << sc.deviceCount << ',' << sc.constraintCount << ',' << (i + 1) << ','
			<< r.elapsedMs << ',' << r.derivedTriples << '\n';
	}
}

std::vector<std::pair<std::size_t, double>> benchSweep(const std::vector<std::size_t>& counts,
	const BenchScenario& base, EngineChoice engine) {
	std::vector<std::pair<std::size_t, double>> curve;
	for (std::size_t m : counts) {
		BenchScenario sc = base;
		sc.constraintCount = m;
		curve.emplace_back(m, runBench(sc, engine).medianMs());
	}
	return curve;
}

void writeSweepData(std::ostream& out, const std::vector<std::pair<std::size_t, double>>& curve) {
	out << "# constraints medianMs\n";
	for (const auto& [m, ms] : curve) out << m << ' ' << ms << '\n';
}

}  // namespace qosflow
