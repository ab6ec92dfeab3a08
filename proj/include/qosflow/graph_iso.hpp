#ifndef QOSFLOW_GRAPH_ISO_HPP
#define QOSFLOW_GRAPH_ISO_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qosflow/term.hpp"

namespace qosflow {

// Blank labels occurring anywhere in the triples, including inside lists.
std::set<std::string> blankLabels(const std::vector<Triple>& triples);

// Applies a label mapping everywhere (unmapped labels stay); result is
// sorted and deduplicated.
std::vector<Triple> relabelBlanks(const std::vector<Triple>& triples,
	const std::map<std::string, std::string>& mapping);

struct CanonicalBlanks {
	std::map<std::string, std::string> mapping;  // original label -> canonical label
	std::vector<Triple> triples;                 // relabeled, sorted, deduplicated
};

// Deterministic canonical form of a triple set modulo blank node renaming:
// colour refinement plus individualization on ties. Blank nodes nested in
// list terms are covered. Two triple sets are isomorphic iff their canonical
// forms compare equal.
CanonicalBlanks canonicalizeBlanksWithMap(const std::vector<Triple>& triples,
	std::string_view labelPrefix = "b");

std::vector<Triple> canonicalizeBlanks(const std::vector<Triple>& triples);

bool isomorphic(const std::vector<Triple>& a, const std::vector<Triple>& b);
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace qosflow

#endif  // QOSFLOW_GRAPH_ISO_HPP
