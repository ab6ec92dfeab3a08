#ifndef QOSFLOW_DOCUMENT_HPP
#define QOSFLOW_DOCUMENT_HPP

#include <map>
#include <string>
#include <vector>

#include "qosflow/term.hpp"

namespace qosflow {

// Premise => conclusion. Variables are scoped to the rule; blank nodes in the
// conclusion mean "mint a fresh node per firing".
struct Rule {
	Graph premise;
	Graph conclusion;

	bool operator==(const Rule& other) const {
		return premise == other.premise && conclusion == other.conclusion;
	}
};

int ruleCompare(const Rule& a, const Rule& b);

// Relabels the rule's blank nodes canonically (label-independent), keeping
// premise and conclusion scopes distinct. Isomorphic rules normalize to the
// same value.
Rule normalizeRuleBlanks(const Rule& rule);

// A parsed N3 document: prefix table plus asserted triples and rules.
// Statement order is irrelevant; equality is set equality of content.
struct Document {
	std::map<std::string, std::string> prefixes;  // name (without colon) -> namespace IRI
	std::vector<Triple> triples;
	std::vector<Rule> rules;

	// Content equality ignoring prefix table and statement order.
	bool sameContent(const Document& other) const;
};

}  // namespace qosflow

#endif  // QOSFLOW_DOCUMENT_HPP
