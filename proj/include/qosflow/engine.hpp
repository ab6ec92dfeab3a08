#ifndef QOSFLOW_ENGINE_HPP
#define QOSFLOW_ENGINE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qosflow/builtins.hpp"
#include "qosflow/document.hpp"
#include "qosflow/store.hpp"

namespace qosflow {

struct RuleCompileError : std::runtime_error {
	RuleCompileError(const Rule& rule, const std::string& message);
	Rule rule;
};

// Rule prepared for evaluation: premise blanks rewritten to variables,
// builtin atoms split out, schedule and range restriction checked.
struct CompiledRule {
	Rule source;
	std::vector<Triple> dataAtoms;
	std::vector<Triple> builtinAtoms;
	std::vector<Triple> conclusion;
	// Variable names occurring in the conclusion, sorted; the skolem key.
	std::vector<std::string> conclusionVars;
	// Stable content hash (label/order independent inputs hash equal only if
	// written identically); feeds skolem identities.
	std::uint64_t contentHash = 0;
};

CompiledRule compileRule(const Rule& rule, const BuiltinRegistry& builtins);

// The node the engine mints for conclusion blank `label` of `rule` under
// `binding`: a pure function of the rule content, the label and the bound
// conclusion variables. Exposed so that code reproducing derivations by hand
// agrees with the engine on node identities. Throws std::invalid_argument if
// a conclusion variable is unbound.
Term skolemNode(const CompiledRule& rule, const std::string& label, const Binding& binding);

// The conclusion triples of one rule firing: variables substituted from the
// binding, blank labels skolemized with skolemNode. This is the emission half
// of rule evaluation; callers that reproduce derivations by hand get
// byte-identical triples. Throws std::invalid_argument on unbound conclusion
// variables.
std::vector<Triple> instantiateConclusion(const CompiledRule& rule, const Binding& binding);

class RuleSet {
public:
	explicit RuleSet(const BuiltinRegistry& builtins = BuiltinRegistry::standard())
		: builtins_(&builtins) {}

	void add(const Rule& rule);  // throws RuleCompileError
	void addDocument(const Document& doc);
	void addRules(const std::vector<Rule>& rules);

	const std::vector<CompiledRule>& rules() const { return rules_; }
	const BuiltinRegistry& builtins() const { return *builtins_; }
	std::size_t size() const { return rules_.size(); }

private:
	const BuiltinRegistry* builtins_;
	std::vector<CompiledRule> rules_;
};

enum class EvalMode { Serial, Parallel };

struct FixpointOptions {
	std::size_t maxIterations = 10000;
	EvalMode mode = EvalMode::Parallel;
};

struct FixpointReport {
	std::size_t iterations = 0;  // rounds run, including the final empty one
	std::size_t derivedTriples = 0;
	double elapsedMs = 0.0;
	bool capped = false;
};

// Instantiated conclusions of one rule against the current store that are
// not yet present; sorted and deduplicated. The store is not modified.
std::vector<Triple> applyRuleOnce(const Store& store, const Rule& rule,
	const BuiltinRegistry& builtins = BuiltinRegistry::standard());

// Semi-naive evaluation to fixpoint: each round joins every rule with the
// previous round's delta, inserts the new triples as one batch, and stops
// on an empty round or at the iteration cap. Derivations are independent of
// rule order, input order and evaluation mode.
FixpointReport fixpoint(Store& store, const RuleSet& rules, const FixpointOptions& opts = {});

}  // namespace qosflow

#endif  // QOSFLOW_ENGINE_HPP
