#include "qosflow/document.hpp"

#include <algorithm>

#include "qosflow/graph_iso.hpp"

namespace qosflow {
namespace {

int graphCompare(const Graph& a, const Graph& b) {
	auto ia = a.begin(), ib = b.begin();
	for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
		int c = tripleCompare(*ia, *ib);
		if (c) return c;
	}
	if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
	return 0;
}

Term relabel(const Term& t, const std::map<std::string, std::string>& m) {
	if (t.isBlank()) {
		auto it = m.find(t.value());
		return it == m.end() ? t : Term::blank(it->second);
	}
	if (t.isList()) {
		std::vector<Term> elems;
		elems.reserve(t.elements().size());
		for (const Term& e : t.elements()) elems.push_back(relabel(e, m));
		return Term::list(std::move(elems));
	}
	return t;
}

Graph relabelGraph(const Graph& g, const std::map<std::string, std::string>& m) {
	std::vector<Triple> out;
	out.reserve(g.size());
	for (const Triple& t : g)
		out.push_back(Triple{relabel(t.subject, m), relabel(t.predicate, m), relabel(t.object, m)});
	return Graph(std::move(out));
}

}  // namespace

Rule normalizeRuleBlanks(const Rule& rule) {
	// Premise and conclusion are canonicalized together so shared structure
	// lines up, with conclusion triples marked to keep the scopes apart.
	static const Term marker = Term::iri("tag:qosflow:conclusion");
	std::vector<Triple> combined(rule.premise.begin(), rule.premise.end());
	for (const Triple& t : rule.conclusion)
		combined.push_back(Triple{t.subject, Term::list({marker, t.predicate}), t.object});
	auto canon = canonicalizeBlanksWithMap(combined, "rb");
	return Rule{relabelGraph(rule.premise, canon.mapping),
		relabelGraph(rule.conclusion, canon.mapping)};
}

int ruleCompare(const Rule& a, const Rule& b) {
	int c = graphCompare(a.premise, b.premise);
	if (c) return c;
	return graphCompare(a.conclusion, b.conclusion);
}

bool Document::sameContent(const Document& other) const {
	if (!isomorphic(triples, other.triples)) return false;
	if (rules.size() != other.rules.size()) return false;
	auto normalize = [](const std::vector<Rule>& rs) {
		std::vector<Rule> out;
		out.reserve(rs.size());
		for (const Rule& r : rs) out.push_back(normalizeRuleBlanks(r));
		std::sort(out.begin(), out.end(), [](const Rule& x, const Rule& y) {
			return ruleCompare(x, y) < 0;
		});
		return out;
	};
	std::vector<Rule> ra = normalize(rules);
	std::vector<Rule> rb = normalize(other.rules);
	for (std::size_t i = 0; i < ra.size(); ++i) {
		if (!(ra[i] == rb[i])) return false;
	}
	return true;
}

}  // namespace qosflow
