#ifndef QOSFLOW_INSTANTIATOR_HPP
#define QOSFLOW_INSTANTIATOR_HPP

#include <map>
#include <stdexcept>
#include <string>

#include "qosflow/store.hpp"
#include "qosflow/translator.hpp"

namespace qosflow {

// Which offering stands in for each abstract ingredient of one recipe.
struct BindingPlan {
	Term recipe;                       // IRI of the recipe to concretize
	std::map<Term, Term> bindings;     // ingredient IRI -> offering IRI
};

struct PlanParseError : std::runtime_error {
	PlanParseError(std::size_t line, const std::string& msg);
	std::size_t line;
};

// Plan text, one entry per line: `recipe = <iri>` once, then
// `<ingredient-iri> = <offering-iri>` pairs. '#' comments, blank lines and
// optional angle brackets are allowed.
BindingPlan parsePlanText(const std::string& text);
BindingPlan parsePlanFile(const std::string& path);

struct InstantiationError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct UnknownRecipe : InstantiationError {
	explicit UnknownRecipe(const Term& recipe);
	Term recipe;
};

struct UnboundIngredient : InstantiationError {
	explicit UnboundIngredient(const Term& ingredient);
	Term ingredient;
};

struct UnknownOffering : InstantiationError {
	explicit UnknownOffering(const Term& offering);
	Term offering;
};

struct AlreadyInstantiated : InstantiationError {
	explicit AlreadyInstantiated(const Term& recipe);
	Term recipe;
};

struct InstantiationReport {
	std::size_t interactionsConcretized = 0;
	TranslationReport translation;
};

// Binds the plan's offerings onto the recipe's interactions: asserts
// interactionFrom/interactionTo on each interaction and on each of its
// constraints, then translates. Endpoint triples and translation output go
// into the store as one batch, so failures leave it untouched.
InstantiationReport instantiate(Store& store, const BindingPlan& plan,
	const Translator& translator, EngineChoice engine = EngineChoice::Direct,
	const FixpointOptions& opts = {});

}  // namespace qosflow

#endif  // QOSFLOW_INSTANTIATOR_HPP
