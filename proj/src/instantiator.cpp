#include "qosflow/instantiator.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qosflow/n3_parser.hpp"
#include "qosflow/vocab.hpp"

namespace qosflow {

PlanParseError::PlanParseError(std::size_t line_, const std::string& msg)
	: std::runtime_error("plan line " + std::to_string(line_) + ": " + msg), line(line_) {}

UnknownRecipe::UnknownRecipe(const Term& r)
	: InstantiationError("unknown recipe " + r.debugString()), recipe(r) {}

UnboundIngredient::UnboundIngredient(const Term& i)
	: InstantiationError("unbound ingredient " + i.debugString()), ingredient(i) {}

UnknownOffering::UnknownOffering(const Term& o)
	: InstantiationError("unknown offering " + o.debugString()), offering(o) {}

AlreadyInstantiated::AlreadyInstantiated(const Term& r)
	: InstantiationError("recipe already instantiated: " + r.debugString()), recipe(r) {}

namespace {

std::string trim(const std::string& s) {
	std::size_t b = s.find_first_not_of(" \t\r");
	if (b == std::string::npos) return "";
	std::size_t e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

Term planIri(const std::string& raw, std::size_t line) {
	std::string v = raw;
	if (v.size() >= 2 && v.front() == '<' && v.back() == '>') v = v.substr(1, v.size() - 2);
	if (v.empty()) throw PlanParseError(line, "empty IRI");
	if (v.find(':') == std::string::npos)
		throw PlanParseError(line, "'" + v + "' is not an absolute IRI");
	return Term::iri(v);
}

}  // namespace

BindingPlan parsePlanText(const std::string& text) {
	BindingPlan plan;
	std::istringstream in(text);
	std::string raw;
	std::size_t lineNo = 0;
	bool haveRecipe = false;
	while (std::getline(in, raw)) {
		++lineNo;
		std::string line = trim(raw);
		if (!line.empty() && line[0] == '#') continue;
		if (line.empty()) continue;
		std::size_t eq = line.find('=');
		if (eq == std::string::npos) throw PlanParseError(lineNo, "expected key = value");
		std::string key = trim(line.substr(0, eq));
		std::string value = trim(line.substr(eq + 1));
		if (key == "recipe") {
			if (haveRecipe) throw PlanParseError(lineNo, "duplicate recipe line");
			plan.recipe = planIri(value, lineNo);
			haveRecipe = true;
			continue;
		}
		Term ingredient = planIri(key, lineNo);
		if (plan.bindings.count(ingredient))
			throw PlanParseError(lineNo, "ingredient bound twice: " + key);
		plan.bindings.emplace(ingredient, planIri(value, lineNo));
	}
	if (!haveRecipe) throw PlanParseError(lineNo, "missing recipe line");
	return plan;
}

BindingPlan parsePlanFile(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot open plan file " + path);
	std::ostringstream buf;
	buf << in.rdbuf();
	return parsePlanText(buf.str());
}

InstantiationReport instantiate(Store& store, const BindingPlan& plan,
	const Translator& translator, EngineChoice engine, const FixpointOptions& opts) {
	const Term rdfType = vocab::rdfType();
	const Term hasInteraction = vocab::rcp("hasInteraction");
	const Term hasIngredient = vocab::rcp("hasIngredient");
	const Term hasConstraint = vocab::rcp("hasConstraint");
	const Term ingredientFrom = vocab::rcp("ingredientFrom");
	const Term ingredientTo = vocab::rcp("ingredientTo");
	const Term from = vocab::rcp("interactionFrom");
	const Term to = vocab::rcp("interactionTo");

	if (!store.contains(Triple{plan.recipe, rdfType, vocab::rcp("Recipe")}))
		throw UnknownRecipe(plan.recipe);

	std::vector<Term> interactions;
	for (const Triple& t : store.match(Pattern{plan.recipe, hasInteraction, std::nullopt}))
		interactions.push_back(t.object);

	// Ingredients: declared directly plus any referenced from interactions.
	std::set<Term> ingredients;
	for (const Triple& t : store.match(Pattern{plan.recipe, hasIngredient, std::nullopt}))
		ingredients.insert(t.object);
	for (const Term& i : interactions) {
		for (const Triple& t : store.match(Pattern{i, ingredientFrom, std::nullopt}))
			ingredients.insert(t.object);
		for (const Triple& t : store.match(Pattern{i, ingredientTo, std::nullopt}))
			ingredients.insert(t.object);
	}
	for (const Term& ing : ingredients) {
		if (!plan.bindings.count(ing)) throw UnboundIngredient(ing);
	}
	for (const auto& [ing, off] : plan.bindings) {
		if (!ingredients.count(ing))
			throw InstantiationError(
				"plan binds " + ing.debugString() + " which is not an ingredient of " +
				plan.recipe.debugString());
		if (!store.contains(Triple{off, rdfType, vocab::rcp("Offering")}))
			throw UnknownOffering(off);
	}

	auto hasEndpoint = [&](const Term& node) {
		return store.countMatches(Pattern{node, from, std::nullopt}) > 0 ||
			store.countMatches(Pattern{node, to, std::nullopt}) > 0;
	};

	InstantiationReport report;
	std::vector<Triple> staged;
	for (const Term& i : interactions) {
		std::vector<Term> froms;
		std::vector<Term> tos;
		for (const Triple& t : store.match(Pattern{i, ingredientFrom, std::nullopt}))
			froms.push_back(plan.bindings.at(t.object));
		for (const Triple& t : store.match(Pattern{i, ingredientTo, std::nullopt}))
			tos.push_back(plan.bindings.at(t.object));
		if (froms.empty() && tos.empty()) continue;  // not an ingredient link
		if (hasEndpoint(i)) throw AlreadyInstantiated(plan.recipe);
		for (const Term& f : froms) staged.push_back(Triple{i, from, f});
		for (const Term& t : tos) staged.push_back(Triple{i, to, t});
		for (const Triple& ct : store.match(Pattern{i, hasConstraint, std::nullopt})) {
			const Term& c = ct.object;
			if (hasEndpoint(c)) throw AlreadyInstantiated(plan.recipe);
			for (const Term& f : froms) staged.push_back(Triple{c, from, f});
			for (const Term& t : tos) staged.push_back(Triple{c, to, t});
		}
		++report.interactionsConcretized;
	}

	report.translation = translator.translate(store, engine, staged, opts);
	return report;
}

}  // namespace qosflow
