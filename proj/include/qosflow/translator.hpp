#ifndef QOSFLOW_TRANSLATOR_HPP
#define QOSFLOW_TRANSLATOR_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qosflow/document.hpp"
#include "qosflow/engine.hpp"
#include "qosflow/numeric.hpp"
#include "qosflow/store.hpp"

namespace qosflow {

struct UnknownPack : std::runtime_error {
	explicit UnknownPack(const std::string& name);
	std::string name;
};

// Names of the shipped rule packs, core first.
const std::vector<std::string>& availablePacks();

// Parsed embedded pack; throws UnknownPack.
const Document& rulePack(const std::string& name);

struct TranslationError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct UnresolvedReference : TranslationError {
	UnresolvedReference(const Term& constraint, const std::string& reference);
	Term constraint;
	std::string reference;
};

struct DivergenceError : TranslationError {
	using TranslationError::TranslationError;
};

// Calculation tree; leaves pull from literals, source-device properties or
// constraint parameters.
struct CalcNode {
	enum class Kind { Literal, DeviceProperty, Param, Product, Sum, Difference, Quotient };
	Kind kind = Kind::Literal;
	Term ref;  // literal value / property IRI / parameter IRI
	std::vector<CalcNode> args;
};

// One translation target: constraints of `constraintClass` produce a
// requirement node of `producesClass` whose `valueProperty` carries the
// calculation result.
struct TargetSpec {
	Term constraintClass;
	Term producesClass;
	Term valueProperty;
	CalcNode calc;
};

// Exact evaluation. Throws UnresolvedReference when a leaf has no value in
// the maps, DivisionByZero from quotients.
NumericValue resolveCalculation(const CalcNode& node, const std::map<Term, Term>& deviceProps,
	const std::map<Term, Term>& params, const Term& constraintForErrors);

enum class EngineChoice { Direct, Rules, Both };

struct SkippedConstraint {
	Term constraint;
	std::string reason;
};

struct TranslationReport {
	std::size_t requirementsProduced = 0;  // one per translated (constraint, target)
	std::size_t newTriples = 0;
	std::vector<SkippedConstraint> skipped;
	FixpointReport fixpoint;  // rules path only
};

// Drives both translation routes over the same target descriptors. The
// direct route mirrors the rule pack semantics in plain code; `Both` runs
// the two, requires isomorphic sdn-namespace output, persists the direct
// result and throws DivergenceError otherwise.
class Translator {
public:
	static Translator fromPacks(const std::vector<std::string>& names);

	const std::vector<TargetSpec>& targets() const { return targets_; }
	const std::vector<std::string>& packNames() const { return packNames_; }

	// All rules from the loaded packs, compiled.
	RuleSet buildRuleSet() const;

	// New output triples over store+staged; nothing is written. Skipped
	// (constraint, target) pairs are recorded when `skipped` is given.
	std::vector<Triple> computeDirect(const Store& store, const std::vector<Triple>& staged,
		std::vector<SkippedConstraint>* skipped) const;

	// Rules route on a scratch copy: staged data plus pack data, then
	// fixpoint; returns everything derived (intermediates included, pack
	// data excluded).
	std::vector<Triple> computeWithRules(const Store& store, const std::vector<Triple>& staged,
		const FixpointOptions& opts, FixpointReport* report) const;

	// Stages `staged`, computes outputs with the chosen engine and inserts
	// staged+outputs as one batch. The store is untouched on error.
	TranslationReport translate(Store& store, EngineChoice engine,
		const std::vector<Triple>& staged = {}, const FixpointOptions& opts = {}) const;

private:
	std::vector<std::string> packNames_;
	std::vector<const Document*> packDocs_;
	std::vector<TargetSpec> targets_;
};

// Triples relevant to the emitted configuration: sdn-namespace predicates
// plus rdf:type triples with sdn classes.
std::vector<Triple> sdnSubgraph(const std::vector<Triple>& triples);

}  // namespace qosflow

#endif  // QOSFLOW_TRANSLATOR_HPP
