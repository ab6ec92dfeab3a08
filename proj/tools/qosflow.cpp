// qosflow: recipe constraints in, northbound configuration out.
//
// Commands: parse, validate, instantiate, translate, emit, watch, bench.
// Exit codes: 0 ok, 1 parse/validation, 2 translation, 3 I/O, 4 bad args.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qosflow/bench.hpp"
#include "qosflow/instantiator.hpp"
#include "qosflow/n3_parser.hpp"
#include "qosflow/n3_writer.hpp"
#include "qosflow/northbound.hpp"
#include "qosflow/store.hpp"
#include "qosflow/translator.hpp"
#include "qosflow/vocab.hpp"

namespace fs = std::filesystem;
using namespace qosflow;

namespace {

enum ExitCode { kOk = 0, kParse = 1, kTranslate = 2, kIo = 3, kArgs = 4 };

std::string readFile(const fs::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot open " + path.string());
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

std::string stemTag(const std::string& filename) {
	std::string stem = fs::path(filename).stem().string();
	for (char& c : stem) {
		bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
			c == '_';
		if (!ok) c = '_';
	}
	return stem;
}

// A store directory holds manifest.txt (one .n3 filename per line, comments
// with '#'), the listed documents, and optionally derived.n3 with all
// triples this tool added. Documents load with blank labels scoped by file
// stem; derived.n3 loads verbatim because its labels carry identity.
struct StoreDir {
	fs::path dir;
	Store store;
	std::map<std::string, std::string> prefixes;
	std::vector<Rule> rules;
	std::size_t derivedStart = 0;

	static StoreDir load(const fs::path& dir) {
		StoreDir out;
		out.dir = dir;
		fs::path manifest = dir / "manifest.txt";
		std::istringstream lines(readFile(manifest));
		std::string line;
		std::vector<std::string> files;
		while (std::getline(lines, line)) {
			std::size_t hash = line.find('#');
			if (hash != std::string::npos) line = line.substr(0, hash);
			while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
				line.pop_back();
			std::size_t start = line.find_first_not_of(" \t");
			if (start == std::string::npos) continue;
			files.push_back(line.substr(start));
		}
		for (const auto& [p, iri] : vocab::standardPrefixes()) out.prefixes[p] = iri;
		std::set<std::string> tags;
		for (const std::string& f : files) {
			if (f == "derived.n3")
				throw IoError("derived.n3 is implicit and must not be listed in manifest.txt");
			std::string tag = stemTag(f);
			if (!tags.insert(tag).second)
				throw IoError("manifest file stems must be unique, duplicate: " + tag);
			Document doc;
			try {
				doc = parseDocument(readFile(dir / f));
			} catch (const ParseError& e) {
				throw ParseError(e.line, e.column, f + ": " + e.message);
			}
			for (const auto& [p, iri] : doc.prefixes) out.prefixes[p] = iri;
			out.store.loadDocument(doc, tag);
			for (const Rule& r : doc.rules) out.rules.push_back(r);
		}
		out.derivedStart = out.store.size();
		fs::path derived = dir / "derived.n3";
		if (fs::exists(derived)) {
			Document doc = parseDocument(readFile(derived));
			for (const auto& [p, iri] : doc.prefixes) out.prefixes[p] = iri;
			out.store.loadDocument(doc, "derived", /*renameBlanks=*/false);
		}
		return out;
	}

	// Writes everything after the source documents back to derived.n3.
	void saveDerived() const {
		Document doc;
		doc.prefixes = prefixes;
		const std::vector<Triple>& all = store.triples();
		doc.triples.assign(all.begin() + static_cast<std::ptrdiff_t>(derivedStart), all.end());
		if (doc.triples.empty()) {
			if (fs::exists(dir / "derived.n3")) fs::remove(dir / "derived.n3");
			return;
		}
		SerializeOptions opts;
		opts.canonicalizeBlankLabels = false;
		writeDocumentFile(dir / "derived.n3", doc, opts);
	}
};

int reportError(ExitCode code, const std::string& what) {
	std::cerr << "error: " << what << "\n";
	return code;
}

struct BadArgs : std::runtime_error {
	using std::runtime_error::runtime_error;
};

EngineChoice parseEngine(const std::string& name) {
	if (name == "direct") return EngineChoice::Direct;
	if (name == "rules") return EngineChoice::Rules;
	if (name == "both") return EngineChoice::Both;
	throw BadArgs("--engine must be direct, rules or both");
}

std::string stripAngles(const std::string& s) {
	if (s.size() >= 2 && s.front() == '<' && s.back() == '>') return s.substr(1, s.size() - 2);
	return s;
}

int cmdParse(const std::vector<std::string>& files, bool dump) {
	for (const std::string& f : files) {
		Document doc;
		try {
			doc = parseDocument(readFile(f));
		} catch (const ParseError& e) {
			std::cerr << f << ": " << e.what() << "\n";
			return kParse;
		} catch (const IoError& e) {
			return reportError(kIo, e.what());
		}
		if (dump) {
			std::cout << serializeDocument(doc);
		} else {
			std::cout << f << ": " << doc.triples.size() << " triple(s), " << doc.rules.size()
					  << " rule(s), " << doc.prefixes.size() << " prefix(es)\n";
		}
	}
	return kOk;
}

int cmdValidate(const fs::path& dir) {
	StoreDir sd = StoreDir::load(dir);
	std::vector<Violation> violations = validate(sd.store);
	bool errors = false;
	for (const Violation& v : violations) {
		std::cerr << (v.warning ? "warning" : "error") << " [" << v.rule << "] "
				  << v.subject.debugString() << ": " << v.message << "\n";
		if (!v.warning) errors = true;
	}
	std::cout << sd.store.size() << " triple(s), " << violations.size() << " finding(s)\n";
	return errors ? kParse : kOk;
}

void printTranslation(const TranslationReport& report) {
	std::cout << "requirements produced: " << report.requirementsProduced << "\n";
	std::cout << "new triples: " << report.newTriples << "\n";
	for (const SkippedConstraint& s : report.skipped)
		std::cout << "skipped " << s.constraint.debugString() << ": " << s.reason << "\n";
	if (report.fixpoint.iterations > 0)
		std::cout << "fixpoint: " << report.fixpoint.iterations << " round(s), "
				  << report.fixpoint.derivedTriples << " derived, " << report.fixpoint.elapsedMs
				  << " ms\n";
}

int cmdInstantiate(const fs::path& dir, const std::string& recipe,
	const std::vector<std::string>& binds, const std::string& engine,
	const std::vector<std::string>& packs) {
	BindingPlan plan;
	bool havePlan = false;
	if (binds.size() == 1 && fs::exists(binds.front()) && binds.front().find('=') == std::string::npos) {
		plan = parsePlanFile(binds.front());
		havePlan = true;
	} else {
		for (const std::string& b : binds) {
			std::size_t eq = b.find('=');
			if (eq == std::string::npos)
				return reportError(kArgs, "--bind expects a plan file or ingredient=offering");
			plan.bindings[Term::iri(stripAngles(b.substr(0, eq)))] =
				Term::iri(stripAngles(b.substr(eq + 1)));
		}
	}
	if (!recipe.empty()) {
		plan.recipe = Term::iri(stripAngles(recipe));
	} else if (!havePlan) {
		return reportError(kArgs, "--recipe required unless the plan file names one");
	}
	StoreDir sd = StoreDir::load(dir);
	Translator translator = Translator::fromPacks(packs.empty() ? availablePacks() : packs);
	InstantiationReport report =
		instantiate(sd.store, plan, translator, parseEngine(engine));
	std::cout << "interactions concretized: " << report.interactionsConcretized << "\n";
	printTranslation(report.translation);
	sd.saveDerived();
	return kOk;
}

int cmdTranslate(const fs::path& dir, const std::string& engine,
	const std::vector<std::string>& packs) {
	StoreDir sd = StoreDir::load(dir);
	Translator translator = Translator::fromPacks(packs.empty() ? availablePacks() : packs);
	TranslationReport report = translator.translate(sd.store, parseEngine(engine));
	printTranslation(report);
	sd.saveDerived();
	return kOk;
}

std::unique_ptr<Sink> makeSink(const std::string& out) {
	if (out.rfind("http://", 0) == 0) return std::make_unique<HttpSink>(out);
	return std::make_unique<FileSink>(out);
}

int cmdEmit(const fs::path& dir, const std::string& out) {
	StoreDir sd = StoreDir::load(dir);
	NorthboundConfig config = extract(sd.store);
	if (out == "-") {
		std::cout << emitString(config);
		return kOk;
	}
	std::unique_ptr<Sink> sink = makeSink(out);
	std::size_t bytes = emit(config, *sink);
	std::cout << "emitted " << bytes << " byte(s) to " << out << "\n";
	return kOk;
}

std::uint64_t fingerprintDir(const fs::path& dir) {
	std::uint64_t h = 1469598103934665603ULL;
	auto mix = [&h](const std::string& s) {
		for (unsigned char c : s) {
			h ^= c;
			h *= 1099511628211ULL;
		}
	};
	std::vector<fs::path> files;
	for (const auto& entry : fs::directory_iterator(dir)) {
		if (entry.path().extension() == ".n3" || entry.path().filename() == "manifest.txt")
			files.push_back(entry.path());
	}
	std::sort(files.begin(), files.end());
	for (const fs::path& f : files) {
		mix(f.filename().string());
		mix(readFile(f));
	}
	return h;
}

int cmdWatch(const fs::path& dir, const std::string& out, unsigned interval, long maxTicks) {
	if (interval < 1) return reportError(kArgs, "--interval must be at least 1 second");
	std::unique_ptr<Sink> sink = makeSink(out);
	Watcher watcher(*sink, [](const std::string& line) { std::cerr << line << "\n"; });
	for (long tick = 0; maxTicks < 0 || tick < maxTicks; ++tick) {
		if (tick > 0) std::this_thread::sleep_for(std::chrono::seconds(interval));
		try {
			std::uint64_t version = fingerprintDir(dir);
			StoreDir sd = StoreDir::load(dir);
			TickResult result = watcher.tick(sd.store, version);
			if (result.emitted) std::cerr << "emitted configuration\n";
		} catch (const ParseError& e) {
			std::cerr << "store unreadable this tick: " << e.what() << "\n";
		} catch (const IoError& e) {
			std::cerr << "store unreadable this tick: " << e.what() << "\n";
		} catch (const IncompleteConfig& e) {
			std::cerr << "store incomplete this tick: " << e.what() << "\n";
		}
	}
	return kOk;
}

int cmdBench(std::size_t devices, std::size_t constraints, std::size_t runs, std::uint64_t seed,
	const std::string& csv, const std::string& plot, const std::string& engine, bool serial) {
	if (devices < 1 || constraints < 1 || runs < 1)
		return reportError(kArgs, "--devices, --constraints and --runs must be at least 1");
	BenchScenario sc;
	sc.deviceCount = devices;
	sc.constraintCount = constraints;
	sc.runs = runs;
	sc.seed = seed;
	FixpointOptions opts;
	if (serial) opts.mode = EvalMode::Serial;
	BenchResult result = runBench(sc, parseEngine(engine), opts);
	std::cout << "median " << result.medianMs() << " ms over " << runs << " run(s), "
			  << result.derivedTriples() << " derived triple(s)\n";
	writeCsv(std::cout, sc, result);
	if (!csv.empty()) {
		std::ofstream f(csv, std::ios::trunc);
		if (!f) return reportError(kIo, "cannot open " + csv);
		writeCsv(f, sc, result);
	}
	if (!plot.empty()) {
		std::vector<std::size_t> counts;
		for (std::size_t m = 100; m <= constraints; m += 100) counts.push_back(m);
		if (counts.empty()) counts.push_back(constraints);
		std::ofstream f(plot, std::ios::trunc);
		if (!f) return reportError(kIo, "cannot open " + plot);
		writeSweepData(f, benchSweep(counts, sc, parseEngine(engine)));
	}
	return kOk;
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"QoS recipe constraints to SDN northbound configuration"};
	app.require_subcommand(1);

	auto* parse = app.add_subcommand("parse", "parse N3 documents");
	std::vector<std::string> parseFiles;
	bool dump = false;
	parse->add_option("files", parseFiles, "N3 files")->required();
	parse->add_flag("--dump", dump, "re-serialize canonically to stdout");

	std::string storeArg;
	auto addStore = [&storeArg](CLI::App* cmd) {
		cmd->add_option("--store", storeArg, "store directory")->required();
	};

	auto* validateCmd = app.add_subcommand("validate", "check store against the vocabulary");
	addStore(validateCmd);

	auto* inst = app.add_subcommand("instantiate", "bind a recipe to offerings and translate");
	addStore(inst);
	std::string recipeArg;
	std::vector<std::string> bindArgs;
	std::string engineArg = "direct";
	std::vector<std::string> packArgs;
	inst->add_option("--recipe", recipeArg, "recipe IRI");
	inst->add_option("--bind", bindArgs, "plan file or ingredient=offering")->required();
	inst->add_option("--engine", engineArg, "direct|rules|both");
	inst->add_option("--packs", packArgs, "rule packs to apply");

	auto* trans = app.add_subcommand("translate", "translate constraints already in the store");
	addStore(trans);
	trans->add_option("--engine", engineArg, "direct|rules|both");
	trans->add_option("--packs", packArgs, "rule packs to apply");

	auto* emitCmd = app.add_subcommand("emit", "extract and emit the northbound configuration");
	addStore(emitCmd);
	std::string outArg;
	emitCmd->add_option("--out", outArg, "output file, '-' or http:// url")->required();

	auto* watchCmd = app.add_subcommand("watch", "emit on store changes");
	addStore(watchCmd);
	unsigned intervalArg = 5;
	long maxTicksArg = -1;
	watchCmd->add_option("--out", outArg, "output file or http:// url")->required();
	watchCmd->add_option("--interval", intervalArg, "seconds between ticks (default 5)");
	watchCmd->add_option("--max-ticks", maxTicksArg, "stop after this many ticks (for scripts)");

	auto* benchCmd = app.add_subcommand("bench", "scaling benchmark");
	std::size_t devicesArg = 100;
	std::size_t constraintsArg = 500;
	std::size_t runsArg = 5;
	std::uint64_t seedArg = 42;
	std::string csvArg;
	std::string plotArg;
	std::string benchEngineArg = "rules";
	bool serialArg = false;
	benchCmd->add_option("--devices", devicesArg, "camera count");
	benchCmd->add_option("--constraints", constraintsArg, "constraint count");
	benchCmd->add_option("--runs", runsArg, "timed runs");
	benchCmd->add_option("--seed", seedArg, "generator seed");
	benchCmd->add_option("--csv", csvArg, "write timings CSV here");
	benchCmd->add_option("--plot", plotArg, "write gnuplot sweep data here");
	benchCmd->add_option("--engine", benchEngineArg, "direct|rules|both");
	benchCmd->add_flag("--serial", serialArg, "disable parallel evaluation");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return kArgs;
	}

	try {
		if (parse->parsed()) return cmdParse(parseFiles, dump);
		if (validateCmd->parsed()) return cmdValidate(storeArg);
		if (inst->parsed())
			return cmdInstantiate(storeArg, recipeArg, bindArgs, engineArg, packArgs);
		if (trans->parsed()) return cmdTranslate(storeArg, engineArg, packArgs);
		if (emitCmd->parsed()) return cmdEmit(storeArg, outArg);
		if (watchCmd->parsed()) return cmdWatch(storeArg, outArg, intervalArg, maxTicksArg);
		if (benchCmd->parsed())
			return cmdBench(devicesArg, constraintsArg, runsArg, seedArg, csvArg, plotArg,
				benchEngineArg, serialArg);
	} catch (const ParseError& e) {
		return reportError(kParse, e.what());
	} catch (const PlanParseError& e) {
		return reportError(kParse, e.what());
	} catch (const IncompleteConfig& e) {
		return reportError(kParse, e.what());
	} catch (const UnknownDevice& e) {
		return reportError(kParse, e.what());
	} catch (const InstantiationError& e) {
		return reportError(kTranslate, e.what());
	} catch (const TranslationError& e) {
		return reportError(kTranslate, e.what());
	} catch (const RuleCompileError& e) {
		return reportError(kTranslate, e.what());
	} catch (const DivisionByZero& e) {
		return reportError(kTranslate, e.what());
	} catch (const BuiltinTypeError& e) {
		return reportError(kTranslate, e.what());
	} catch (const IoError& e) {
		return reportError(kIo, e.what());
	} catch (const BadArgs& e) {
		return reportError(kArgs, e.what());
	} catch (const std::exception& e) {
		return reportError(kIo, std::string("unexpected: ") + e.what());
	}
	return kOk;
}
