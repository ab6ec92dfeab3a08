// Tests for blank-node canonicalization and graph isomorphism: known
// isomorphic/non-isomorphic pairs plus determinism properties under random
// relabelings.
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qosflow/graph_iso.hpp"
#include "qosflow/n3_parser.hpp"
#include "qosflow/term.hpp"
#include "test_util.hpp"

using namespace qosflow;

namespace {

std::vector<Triple> triplesOf(const std::string& body) {
	return parseDocument("@prefix ex: <http://e.test/> .\n" + body).triples;
}

// Shuffle blank labels with a random injective map into a fresh namespace.
std::vector<Triple> scramble(const std::vector<Triple>& triples, test::Rng& rng) {
	std::set<std::string> labels = blankLabels(triples);
	std::vector<std::string> names(labels.begin(), labels.end());
	std::shuffle(names.begin(), names.end(), rng);
	std::map<std::string, std::string> mapping;
	int i = 0;
	for (const std::string& l : labels) mapping[l] = "z" + std::to_string(rng() % 7) + "_" +
		names[static_cast<std::size_t>(i++)];
	// Ensure injectivity: suffix with a running counter.
	int j = 0;
	for (auto& [k, v] : mapping) v += "_" + std::to_string(j++);
	return relabelBlanks(triples, mapping);
}

}  // namespace

TEST_CASE("blankLabels finds labels nested inside lists") {
	std::vector<Triple> ts = {
		Triple{Term::blank("a"), Term::iri("http://e.test/p"),
			Term::list({Term::blank("b"), Term::list({Term::blank("c")})})},
	};
	std::set<std::string> expected = {"a", "b", "c"};
	CHECK(blankLabels(ts) == expected);
	CHECK(blankLabels({}).empty());
}

TEST_CASE("relabelBlanks applies the mapping everywhere and sorts") {
	std::vector<Triple> ts = triplesOf("_:x ex:p _:y . _:y ex:q ( _:x 1 ) .");
	std::vector<Triple> out = relabelBlanks(ts, {{"x", "s"}, {"y", "t"}});
	std::set<std::string> expected = {"s", "t"};
	CHECK(blankLabels(out) == expected);
	CHECK(std::is_sorted(out.begin(), out.end(), [](const Triple& a, const Triple& b) {
		return tripleCompare(a, b) < 0;
	}));
	// Unmapped labels stay as-is.
	std::vector<Triple> partial = relabelBlanks(ts, {{"x", "s"}});
	std::set<std::string> expectedPartial = {"s", "y"};
	CHECK(blankLabels(partial) == expectedPartial);
}

TEST_CASE("canonicalizeBlanksWithMap returns a usable mapping") {
	std::vector<Triple> ts = triplesOf("_:m ex:p _:n . _:n ex:q 1 .");
	CanonicalBlanks canon = canonicalizeBlanksWithMap(ts, "k");
	CHECK(canon.mapping.size() == 2);
	for (const auto& [orig, renamed] : canon.mapping)
		CHECK(renamed.rfind("k", 0) == 0);
	CHECK(relabelBlanks(ts, canon.mapping) == canon.triples);
}

TEST_CASE("isomorphism holds across blank renaming and statement order") {
	std::vector<Triple> a = triplesOf("_:x ex:p _:y . _:y ex:p _:x . _:x ex:tag 1 .");
	std::vector<Triple> b = triplesOf("_:n2 ex:p _:n1 . _:n2 ex:tag 1 . _:n1 ex:p _:n2 .");
	CHECK(isomorphic(a, b));
	CHECK(canonicalizeBlanks(a) == canonicalizeBlanks(b));
}

TEST_CASE("a 2-cycle is not isomorphic to two self-loops") {
	// Same predicate multiset, same counts, different wiring.
	std::vector<Triple> cycle = triplesOf("_:a ex:p _:b . _:b ex:p _:a .");
	std::vector<Triple> loops = triplesOf("_:a ex:p _:a . _:b ex:p _:b .");
	CHECK(!isomorphic(cycle, loops));
	CHECK(isomorphic(cycle, triplesOf("_:q ex:p _:r . _:r ex:p _:q .")));
}

TEST_CASE("symmetric structures needing individualization still canonicalize") {
	// Two indistinguishable 2-cycles: colour refinement alone cannot split
	// them; individualization must pick consistently.
	std::vector<Triple> g1 = triplesOf(
		"_:a ex:p _:b . _:b ex:p _:a . _:c ex:p _:d . _:d ex:p _:c .");
	std::vector<Triple> g2 = triplesOf(
		"_:w ex:p _:x . _:x ex:p _:w . _:y ex:p _:z . _:z ex:p _:y .");
	CHECK(isomorphic(g1, g2));
	// Chain of 4 vs two 2-cycles: not isomorphic.
	std::vector<Triple> chain = triplesOf(
		"_:a ex:p _:b . _:b ex:p _:c . _:c ex:p _:d . _:d ex:p _:a .");
	CHECK(!isomorphic(g1, chain));
}

TEST_CASE("ground graphs are isomorphic exactly when equal as sets") {
	std::vector<Triple> a = triplesOf("ex:s ex:p 1 . ex:s ex:q 2 .");
	std::vector<Triple> b = triplesOf("ex:s ex:q 2 . ex:s ex:p 1 . ex:s ex:p 1 .");
	CHECK(isomorphic(a, b));
	CHECK(!isomorphic(a, triplesOf("ex:s ex:p 1 .")));
	const std::vector<Triple> none;
	CHECK(isomorphic(none, none));
	CHECK(!isomorphic(a, none));
}

TEST_CASE("blanks inside lists participate in the isomorphism") {
	std::vector<Triple> a = triplesOf("ex:s ex:p ( _:x _:y ) . _:x ex:q 1 .");
	std::vector<Triple> b = triplesOf("ex:s ex:p ( _:m _:n ) . _:m ex:q 1 .");
	std::vector<Triple> c = triplesOf("ex:s ex:p ( _:m _:n ) . _:n ex:q 1 .");
	CHECK(isomorphic(a, b));
	CHECK(!isomorphic(a, c));
}

TEST_CASE("Graph overload agrees with the vector overload") {
	Graph a(triplesOf("_:x ex:p _:y ."));
	Graph b(triplesOf("_:p ex:p _:q ."));
	CHECK(isomorphic(a, b));
}

TEST_CASE("property: canonical form is invariant under random relabeling") {
	test::Rng rng(77001);
	for (int i = 0; i < 80; ++i) {
		std::vector<Triple> g;
		std::size_t n = 1 + test::pick(rng, 10);
		for (std::size_t t = 0; t < n; ++t) g.push_back(test::randomGroundTriple(rng));
		std::vector<Triple> scrambled = scramble(g, rng);
		CHECK(isomorphic(g, scrambled));
		CHECK(canonicalizeBlanks(g) == canonicalizeBlanks(scrambled));
		// Canonicalization is idempotent.
		std::vector<Triple> canon = canonicalizeBlanks(g);
		CHECK(canonicalizeBlanks(canon) == canon);
	}
}

TEST_CASE("property: dropping a blank-touching triple breaks isomorphism") {
	test::Rng rng(77002);
	for (int i = 0; i < 40; ++i) {
		std::vector<Triple> g;
		std::size_t n = 2 + test::pick(rng, 8);
		for (std::size_t t = 0; t < n; ++t) g.push_back(test::randomGroundTriple(rng));
		std::vector<Triple> canon = canonicalizeBlanks(g);
		if (canon.size() < 2) continue;
		std::vector<Triple> smaller(canon.begin(), canon.end() - 1);
		CHECK(!isomorphic(canon, smaller));
	}
}
