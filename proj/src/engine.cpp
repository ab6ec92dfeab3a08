#include "qosflow/engine.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <set>

namespace qosflow {

RuleCompileError::RuleCompileError(const Rule& r, const std::string& msg)
	: std::runtime_error("rule compilation failed: " + msg), rule(r) {}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
	for (int i = 0; i < 8; ++i) {
		h ^= (v >> (i * 8)) & 0xff;
		h *= kFnvPrime;
	}
	return h;
}

std::uint64_t mixStr(std::uint64_t h, std::string_view s) {
	for (unsigned char c : s) {
		h ^= c;
		h *= kFnvPrime;
	}
	return h;
}

// Premise blanks behave as variables; the rewritten name space cannot clash
// with parsed variables because '.' is not a variable name character.
Term blanksToVars(const Term& t) {
	if (t.isBlank()) return Term::variable(".b" + t.value());
	if (t.isList()) {
		std::vector<Term> elems;
		elems.reserve(t.elements().size());
		for (const Term& e : t.elements()) elems.push_back(blanksToVars(e));
		return Term::list(std::move(elems));
	}
	return t;
}

void collectVars(const Term& t, std::set<std::string>& out) {
	if (t.isVariable()) out.insert(t.value());
	if (t.isList())
		for (const Term& e : t.elements()) collectVars(e, out);
}

void collectVars(const Triple& t, std::set<std::string>& out) {
	collectVars(t.subject, out);
	collectVars(t.predicate, out);
	collectVars(t.object, out);
}

std::string hex(std::uint64_t v) {
	static const char* digits = "0123456789abcdef";
	std::string out(16, '0');
	for (int i = 15; i >= 0; --i) {
		out[i] = digits[v & 0xf];
		v >>= 4;
	}
	return out;
}

std::uint64_t hashTerm(std::uint64_t h, const Term& t) {
	h = mix(h, static_cast<std::uint64_t>(t.kind()));
	h = mixStr(h, t.value());
	h = mixStr(h, t.datatype());
	for (const Term& e : t.elements()) h = hashTerm(h, e);
	return h;
}

std::uint64_t hashGraph(std::uint64_t h, const Graph& g) {
	for (const Triple& t : g) {
		h = hashTerm(h, t.subject);
		h = hashTerm(h, t.predicate);
		h = hashTerm(h, t.object);
	}
	return h;
}

Pattern groundPositions(const Triple& t) {
	Pattern p;
	if (t.subject.isGround()) p.subject = t.subject;
	if (t.predicate.isGround()) p.predicate = t.predicate;
	if (t.object.isGround()) p.object = t.object;
	return p;
}

// Conclusion blanks mint one fresh node per label per (rule, conclusion
// binding): deterministic across runs, idempotent across re-evaluation.
Term instantiateTerm(const CompiledRule& rule, const Term& t, const Binding& binding,
	std::map<std::string, Term>& skolems) {
	if (t.isVariable()) {
		const Term* v = binding.lookup(t.value());
		if (!v)
			throw std::invalid_argument("conclusion variable ?" + t.value() + " is unbound");
		return *v;
	}
	if (t.isBlank()) {
		auto it = skolems.find(t.value());
		if (it != skolems.end()) return it->second;
		Term node = skolemNode(rule, t.value(), binding);
		skolems.emplace(t.value(), node);
		return node;
	}
	if (t.isList()) {
		std::vector<Term> elems;
		elems.reserve(t.elements().size());
		for (const Term& e : t.elements())
			elems.push_back(instantiateTerm(rule, e, binding, skolems));
		return Term::list(std::move(elems));
	}
	return t;
}

}  // namespace

Term skolemNode(const CompiledRule& rule, const std::string& label, const Binding& binding) {
	std::uint64_t h = mix(kFnvOffset, rule.contentHash);
	h = mixStr(h, label);
	for (const std::string& var : rule.conclusionVars) {
		const Term* bound = binding.lookup(var);
		if (!bound)
			throw std::invalid_argument("skolemNode: conclusion variable ?" + var + " is unbound");
		h = mixStr(h, var);
		h = hashTerm(h, *bound);
	}
	return Term::blank("sk_" + label + "_" + hex(h));
}

std::vector<Triple> instantiateConclusion(const CompiledRule& rule, const Binding& binding) {
	std::map<std::string, Term> skolems;
	std::vector<Triple> out;
	out.reserve(rule.conclusion.size());
	for (const Triple& t : rule.conclusion) {
		out.push_back(Triple{instantiateTerm(rule, t.subject, binding, skolems),
			instantiateTerm(rule, t.predicate, binding, skolems),
			instantiateTerm(rule, t.object, binding, skolems)});
	}
	return out;
}

namespace {

// Evaluates one compiled rule against a snapshot, optionally seeded so that
// one chosen data atom must match within the delta (semi-naive rounds).
// Emits instantiated conclusion triples; duplicates and already-present
// triples are filtered by the caller.
class RuleEval {
public:
	RuleEval(const Snapshot& snap, const CompiledRule& rule, const BuiltinRegistry& builtins,
		const std::vector<Triple>* delta, int seedAtom)
		: snap_(snap), rule_(rule), builtins_(builtins), delta_(delta), seedAtom_(seedAtom) {}

	std::vector<Triple> run() {
		used_.assign(rule_.dataAtoms.size(), false);
		builtinDone_.assign(rule_.builtinAtoms.size(), false);
		if (seedAtom_ < 0) {
			join(Binding{}, rule_.dataAtoms.size());
		} else {
			const Triple& atom = rule_.dataAtoms[seedAtom_];
			used_[seedAtom_] = true;
			for (const Triple& t : *delta_) {
				Binding b;
				if (unifyTriple(atom, t, b)) join(b, rule_.dataAtoms.size() - 1);
			}
		}
		return std::move(out_);
	}

private:
	void join(const Binding& binding, std::size_t remainingData) {
		// Builtins fire as soon as their subject is ground; evaluation
		// branches over candidate objects.
		for (std::size_t i = 0; i < rule_.builtinAtoms.size(); ++i) {
			if (builtinDone_[i]) continue;
			const Triple& atom = rule_.builtinAtoms[i];
			Term subject = substituteTerm(atom.subject, binding);
			if (!subject.isGround()) continue;
			BuiltinFn fn = builtins_.find(atom.predicate.value());
			Term objPattern = substituteTerm(atom.object, binding);
			builtinDone_[i] = true;
			for (const Term& candidate : fn(subject)) {
				Binding next = binding;
				if (unifyTerm(objPattern, candidate, next)) join(next, remainingData);
			}
			builtinDone_[i] = false;
			return;
		}
		if (remainingData == 0) {
			// A builtin whose subject never grounds defers forever: the
			// binding yields no derivation, by design not an error.
			for (std::size_t i = 0; i < rule_.builtinAtoms.size(); ++i) {
				if (!builtinDone_[i]) return;
			}
			emit(binding);
			return;
		}
		std::size_t best = rule_.dataAtoms.size();
		std::size_t bestCount = 0;
		Triple bestSub;
		for (std::size_t i = 0; i < rule_.dataAtoms.size(); ++i) {
			if (used_[i]) continue;
			Triple sub = substituteTriple(rule_.dataAtoms[i], binding);
			std::size_t count = snap_.countMatches(groundPositions(sub));
			if (best == rule_.dataAtoms.size() || count < bestCount) {
				best = i;
				bestCount = count;
				bestSub = sub;
			}
		}
		used_[best] = true;
		for (const Triple& cand : snap_.match(groundPositions(bestSub))) {
			Binding next = binding;
			if (unifyTriple(bestSub, cand, next)) join(next, remainingData - 1);
		}
		used_[best] = false;
	}

	void emit(const Binding& binding) {
		std::vector<Triple> derived = instantiateConclusion(rule_, binding);
		out_.insert(out_.end(), std::make_move_iterator(derived.begin()),
			std::make_move_iterator(derived.end()));
	}

	const Snapshot& snap_;
	const CompiledRule& rule_;
	const BuiltinRegistry& builtins_;
	const std::vector<Triple>* delta_;
	int seedAtom_;
	std::vector<bool> used_;
	std::vector<bool> builtinDone_;
	std::vector<Triple> out_;
};

}  // namespace

CompiledRule compileRule(const Rule& rule, const BuiltinRegistry& builtins) {
	CompiledRule out;
	out.source = rule;

	for (const Triple& t : rule.premise) {
		Triple rewritten{blanksToVars(t.subject), blanksToVars(t.predicate),
			blanksToVars(t.object)};
		bool isBuiltin = rewritten.predicate.isIri() && builtins.contains(rewritten.predicate.value());
		(isBuiltin ? out.builtinAtoms : out.dataAtoms).push_back(rewritten);
	}
	for (const Triple& t : rule.conclusion) {
		if (t.predicate.isIri() && builtins.contains(t.predicate.value()))
			throw RuleCompileError(rule, "builtin predicate " + t.predicate.value() +
				" cannot be derived");
		out.conclusion.push_back(t);
	}

	// Schedule check: every builtin subject must eventually become ground
	// from data-atom variables plus earlier builtin outputs.
	std::set<std::string> known;
	for (const Triple& t : out.dataAtoms) collectVars(t, known);
	std::vector<bool> scheduled(out.builtinAtoms.size(), false);
	bool progress = true;
	while (progress) {
		progress = false;
		for (std::size_t i = 0; i < out.builtinAtoms.size(); ++i) {
			if (scheduled[i]) continue;
			std::set<std::string> subjectVars;
			collectVars(out.builtinAtoms[i].subject, subjectVars);
			bool ready = std::all_of(subjectVars.begin(), subjectVars.end(),
				[&known](const std::string& v) { return known.count(v) > 0; });
			if (!ready) continue;
			scheduled[i] = true;
			progress = true;
			collectVars(out.builtinAtoms[i].object, known);
		}
	}
	for (std::size_t i = 0; i < out.builtinAtoms.size(); ++i) {
		if (!scheduled[i])
			throw RuleCompileError(rule, "builtin subject " +
				out.builtinAtoms[i].subject.debugString() + " can never become ground");
	}

	std::set<std::string> conclusionVars;
	for (const Triple& t : out.conclusion) collectVars(t, conclusionVars);
	for (const std::string& v : conclusionVars) {
		if (!known.count(v))
			throw RuleCompileError(rule, "conclusion variable ?" + v + " is never bound");
	}
	out.conclusionVars.assign(conclusionVars.begin(), conclusionVars.end());

	std::uint64_t h = mixStr(kFnvOffset, "rule");
	h = hashGraph(h, rule.premise);
	h = mixStr(h, "=>");
	h = hashGraph(h, rule.conclusion);
	out.contentHash = h;
	return out;
}

void RuleSet::add(const Rule& rule) { rules_.push_back(compileRule(rule, *builtins_)); }

void RuleSet::addDocument(const Document& doc) {
	for (const Rule& r : doc.rules) add(r);
}

void RuleSet::addRules(const std::vector<Rule>& rules) {
	for (const Rule& r : rules) add(r);
}

namespace {

struct Task {
	std::size_t ruleIdx;
	int seedAtom;  // -1 = full evaluation
};

std::vector<Triple> runRound(const Store& store, const RuleSet& rules,
	const std::vector<Triple>* delta, EvalMode mode) {
	Snapshot snap = store.snapshot();
	std::vector<Task> tasks;
	for (std::size_t r = 0; r < rules.rules().size(); ++r) {
		if (!delta) {
			tasks.push_back({r, -1});
		} else {
			std::size_t n = rules.rules()[r].dataAtoms.size();
			for (std::size_t a = 0; a < n; ++a) tasks.push_back({r, static_cast<int>(a)});
		}
	}

	std::vector<std::vector<Triple>> results(tasks.size());
	std::vector<std::exception_ptr> errors(tasks.size());
	bool parallel = mode == EvalMode::Parallel;
	(void)parallel;
#if defined(QOSFLOW_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
#endif
	for (long i = 0; i < static_cast<long>(tasks.size()); ++i) {
		try {
			const CompiledRule& rule = rules.rules()[tasks[i].ruleIdx];
			RuleEval eval(snap, rule, rules.builtins(), delta, tasks[i].seedAtom);
			results[i] = eval.run();
		} catch (...) {
			errors[i] = std::current_exception();
		}
	}
	for (const std::exception_ptr& e : errors) {
		if (e) std::rethrow_exception(e);
	}

	// Merge in task order, then canonicalize: output is independent of
	// scheduling, and of rule order once sorted.
	std::vector<Triple> merged;
	for (std::vector<Triple>& r : results)
		merged.insert(merged.end(), r.begin(), r.end());
	std::sort(merged.begin(), merged.end());
	merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
	std::vector<Triple> fresh;
	fresh.reserve(merged.size());
	for (Triple& t : merged) {
		if (!store.contains(t)) fresh.push_back(std::move(t));
	}
	return fresh;
}

}  // namespace

std::vector<Triple> applyRuleOnce(const Store& store, const Rule& rule,
	const BuiltinRegistry& builtins) {
	CompiledRule compiled = compileRule(rule, builtins);
	Snapshot snap = store.snapshot();
	RuleEval eval(snap, compiled, builtins, nullptr, -1);
	std::vector<Triple> out = eval.run();
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	std::vector<Triple> fresh;
	for (Triple& t : out) {
		if (!store.contains(t)) fresh.push_back(std::move(t));
	}
	return fresh;
}

FixpointReport fixpoint(Store& store, const RuleSet& rules, const FixpointOptions& opts) {
	auto start = std::chrono::steady_clock::now();
	FixpointReport report;
	std::vector<Triple> last;
	const std::vector<Triple>* delta = nullptr;
	while (true) {
		if (report.iterations >= opts.maxIterations) {
			report.capped = true;
			break;
		}
		++report.iterations;
		std::vector<Triple> fresh = runRound(store, rules, delta, opts.mode);
		if (fresh.empty()) break;
		store.insertBatch(fresh);
		report.derivedTriples += fresh.size();
		last = std::move(fresh);
		delta = &last;
	}
	report.elapsedMs =
		std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
			.count();
	return report;
}

}  // namespace qosflow
