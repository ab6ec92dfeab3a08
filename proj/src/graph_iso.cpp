#include "qosflow/graph_iso.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

namespace qosflow {
namespace {

using Colors = std::map<std::string, std::uint64_t>;

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
	for (int i = 0; i < 8; ++i) {
		h ^= (v >> (i * 8)) & 0xff;
		h *= kFnvPrime;
	}
	return h;
}

void collectBlanks(const Term& t, std::set<std::string>& out) {
	if (t.isBlank()) out.insert(t.value());
	if (t.isList())
		for (const Term& e : t.elements()) collectBlanks(e, out);
}

// Structural hash where each blank contributes its current colour, not its
// label. This is what makes refinement label-independent.
std::uint64_t skeleton(const Term& t, const Colors& colors) {
	if (t.isBlank()) return mix(mix(kFnvOffset, 7), colors.at(t.value()));
	if (t.isList()) {
		std::uint64_t h = mix(kFnvOffset, 11);
		for (const Term& e : t.elements()) h = mix(h, skeleton(e, colors));
		return h;
	}
	return mix(kFnvOffset, t.hash());
}

void occurrencePaths(const Term& t, const std::string& label, std::uint64_t path,
	std::vector<std::uint64_t>& out) {
	if (t.isBlank() && t.value() == label) out.push_back(path);
	if (t.isList()) {
		for (std::size_t i = 0; i < t.elements().size(); ++i)
			occurrencePaths(t.elements()[i], label, mix(path, i + 1), out);
	}
}

Colors refine(const std::vector<Triple>& triples, Colors colors) {
	auto partitionOf = [&colors]() {
		std::map<std::uint64_t, std::set<std::string>> classes;
		for (const auto& [label, color] : colors) classes[color].insert(label);
		std::set<std::set<std::string>> part;
		for (auto& [color, members] : classes) part.insert(members);
		return part;
	};
	auto prev = partitionOf();
	for (int round = 0; round < 64; ++round) {
		Colors next;
		for (const auto& [label, color] : colors) {
			std::vector<std::uint64_t> sigs;
			for (const Triple& t : triples) {
				std::uint64_t sk = mix(mix(mix(kFnvOffset, skeleton(t.subject, colors)),
					skeleton(t.predicate, colors)), skeleton(t.object, colors));
				std::vector<std::uint64_t> paths;
				occurrencePaths(t.subject, label, 101, paths);
				occurrencePaths(t.predicate, label, 103, paths);
				occurrencePaths(t.object, label, 107, paths);
				for (std::uint64_t p : paths) sigs.push_back(mix(sk, p));
			}
			std::sort(sigs.begin(), sigs.end());
			std::uint64_t h = mix(kFnvOffset, color);
			for (std::uint64_t s : sigs) h = mix(h, s);
			next[label] = h;
		}
		colors = std::move(next);
		auto part = partitionOf();
		if (part == prev) break;
		prev = std::move(part);
	}
	return colors;
}

Term relabelTerm(const Term& t, const std::map<std::string, std::string>& mapping) {
	if (t.isBlank()) {
		auto it = mapping.find(t.value());
		return it == mapping.end() ? t : Term::blank(it->second);
	}
	if (t.isList()) {
		bool touched = false;
		std::vector<Term> elems;
		elems.reserve(t.elements().size());
		for (const Term& e : t.elements()) {
			Term r = relabelTerm(e, mapping);
			touched = touched || r != e;
			elems.push_back(std::move(r));
		}
		if (!touched) return t;
		return Term::list(std::move(elems));
	}
	return t;
}

struct Search {
	const std::vector<Triple>& triples;
	std::string_view prefix;
	int budget = 256;

	CanonicalBlanks fromColors(const Colors& colors) {
		// All classes are singletons here: ordering blanks by colour is
		// isomorphism-invariant.
		std::vector<std::pair<std::uint64_t, std::string>> order;
		for (const auto& [label, color] : colors) order.emplace_back(color, label);
		std::sort(order.begin(), order.end());
		CanonicalBlanks out;
		for (std::size_t i = 0; i < order.size(); ++i)
			out.mapping[order[i].second] = std::string(prefix) + std::to_string(i);
		out.triples = relabelBlanks(triples, out.mapping);
		return out;
	}

	CanonicalBlanks run(Colors colors) {
		colors = refine(triples, std::move(colors));
		std::map<std::uint64_t, std::vector<std::string>> classes;
		for (const auto& [label, color] : colors) classes[color].push_back(label);
		const std::vector<std::string>* tied = nullptr;
		for (const auto& [color, members] : classes) {
			if (members.size() > 1) {
				tied = &members;
				break;
			}
		}
		if (!tied) return fromColors(colors);
		// Individualize each member of the first tied class; keep the
		// lexicographically least canonical result. The budget caps
		// pathological symmetric graphs; within budget the result is a true
		// canonical form.
		std::vector<std::string> candidates = *tied;
		std::sort(candidates.begin(), candidates.end());
		if (budget <= 0) candidates.resize(1);
		CanonicalBlanks best;
		bool haveBest = false;
		for (const std::string& label : candidates) {
			--budget;
			Colors next = colors;
			next[label] = mix(next[label], 0x1ced);
			CanonicalBlanks cand = run(std::move(next));
			if (!haveBest || cand.triples < best.triples) {
				best = std::move(cand);
				haveBest = true;
			}
			if (budget <= 0) break;
		}
		return best;
	}
};

}  // namespace

std::set<std::string> blankLabels(const std::vector<Triple>& triples) {
	std::set<std::string> labels;
	for (const Triple& t : triples) {
		collectBlanks(t.subject, labels);
		collectBlanks(t.predicate, labels);
		collectBlanks(t.object, labels);
	}
	return labels;
}

std::vector<Triple> relabelBlanks(const std::vector<Triple>& triples,
	const std::map<std::string, std::string>& mapping) {
	std::vector<Triple> out;
	out.reserve(triples.size());
	for (const Triple& t : triples) {
		out.push_back(Triple{relabelTerm(t.subject, mapping), relabelTerm(t.predicate, mapping),
			relabelTerm(t.object, mapping)});
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

CanonicalBlanks canonicalizeBlanksWithMap(const std::vector<Triple>& triples,
	std::string_view labelPrefix) {
	std::set<std::string> labels = blankLabels(triples);
	Colors colors;
	for (const std::string& l : labels) colors[l] = 0;
	Search search{triples, labelPrefix};
	return search.run(std::move(colors));
}

std::vector<Triple> canonicalizeBlanks(const std::vector<Triple>& triples) {
	return canonicalizeBlanksWithMap(triples).triples;
}

bool isomorphic(const std::vector<Triple>& a, const std::vector<Triple>& b) {
	return canonicalizeBlanks(a) == canonicalizeBlanks(b);
}

bool isomorphic(const Graph& a, const Graph& b) {
	return isomorphic(std::vector<Triple>(a.begin(), a.end()), std::vector<Triple>(b.begin(), b.end()));
}

}  // namespace qosflow
