// Tests for the indexed triple store: batch semantics, generations, index
// consistency, conjunctive matching against a naive oracle, snapshots and
// document loading.
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "qosflow/n3_parser.hpp"
#include "qosflow/store.hpp"
#include "qosflow/term.hpp"
#include "test_util.hpp"

using namespace qosflow;

namespace {

Triple tr(const std::string& s, const std::string& p, const std::string& o) {
	auto mk = [](const std::string& x) { return Term::iri("http://e.test/" + x); };
	return Triple{mk(s), mk(p), mk(o)};
}

// Naive full-scan match used as the oracle for the indexed paths.
std::vector<Triple> scanMatch(const Store& st, const Pattern& p) {
	std::vector<Triple> out;
	for (const Triple& t : st.triples()) {
		if (p.subject && !(t.subject == *p.subject)) continue;
		if (p.predicate && !(t.predicate == *p.predicate)) continue;
		if (p.object && !(t.object == *p.object)) continue;
		out.push_back(t);
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

// Naive backtracking join used as the oracle for matchGraph.
void joinRec(const Store& st, const std::vector<Triple>& atoms, std::size_t i,
	Binding b, std::vector<Binding>& out) {
	if (i == atoms.size()) {
		out.push_back(std::move(b));
		return;
	}
	for (const Triple& t : st.triples()) {
		Binding next = b;
		if (unifyTriple(substituteTriple(atoms[i], b), t, next))
			joinRec(st, atoms, i + 1, std::move(next), out);
	}
}

std::vector<Binding> scanJoin(const Store& st, const Graph& pattern) {
	std::vector<Triple> atoms(pattern.begin(), pattern.end());
	std::vector<Binding> out;
	joinRec(st, atoms, 0, Binding{}, out);
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

Pattern randomPattern(const Store& st, test::Rng& rng) {
	Pattern p;
	// Half the time reuse a stored triple's positions so matches exist.
	const std::vector<Triple>& ts = st.triples();
	Triple base = ts.empty() ? test::randomGroundTriple(rng)
							 : ts[test::pick(rng, ts.size())];
	if (test::chance(rng, 0.5)) p.subject = test::chance(rng, 0.7)
			? base.subject : test::randomGroundTerm(rng);
	if (test::chance(rng, 0.5)) p.predicate = test::chance(rng, 0.7)
			? base.predicate : test::randomIri(rng);
	if (test::chance(rng, 0.5)) p.object = test::chance(rng, 0.7)
			? base.object : test::randomGroundTerm(rng);
	return p;
}

}  // namespace

TEST_CASE("insertBatch deduplicates and moves the generation only on growth") {
	Store st;
	CHECK(st.generation() == 0);
	CHECK(st.insertBatch({tr("s", "p", "o"), tr("s", "p", "o"), tr("s", "q", "o")}) == 2);
	CHECK(st.size() == 2);
	CHECK(st.generation() == 1);
	// Re-inserting existing triples adds nothing and freezes the generation.
	CHECK(st.insertBatch({tr("s", "p", "o")}) == 0);
	CHECK(st.generation() == 1);
	CHECK(st.insertBatch({}) == 0);
	CHECK(st.generation() == 1);
	CHECK(st.insertBatch({tr("a", "b", "c"), tr("s", "q", "o")}) == 1);
	CHECK(st.generation() == 2);
	// Insertion order is preserved.
	CHECK(st.triples()[0] == tr("s", "p", "o"));
	CHECK(st.triples()[2] == tr("a", "b", "c"));
}

TEST_CASE("generationOf reports the introducing batch") {
	Store st;
	st.insertBatch({tr("s", "p", "o")});
	st.insertBatch({tr("x", "y", "z")});
	CHECK(st.generationOf(tr("s", "p", "o")) == 1);
	CHECK(st.generationOf(tr("x", "y", "z")) == 2);
	CHECK(st.generationOf(tr("not", "there", "ever")) == 0);
	// Duplicate insert attempts do not refresh the generation.
	st.insertBatch({tr("s", "p", "o"), tr("new", "new", "new")});
	CHECK(st.generationOf(tr("s", "p", "o")) == 1);
	CHECK(st.generationOf(tr("new", "new", "new")) == 3);
}

TEST_CASE("non-ground triples are rejected before any mutation") {
	Store st;
	st.insertBatch({tr("s", "p", "o")});
	std::vector<Triple> batch = {
		tr("a", "b", "c"),
		Triple{Term::iri("http://e.test/s"), Term::iri("http://e.test/p"),
			Term::list({Term::variable("v")})},
	};
	CHECK_THROWS_AS(st.insertBatch(batch), VariableInData);
	CHECK(st.size() == 1);
	CHECK(st.generation() == 1);
	CHECK(!st.contains(tr("a", "b", "c")));
	try {
		st.insertBatch(batch);
	} catch (const VariableInData& e) {
		CHECK(e.triple == batch[1]);
	}
}

TEST_CASE("match with every pattern shape agrees with a full scan") {
	test::Rng rng(31001);
	Store st;
	std::vector<Triple> data;
	for (int i = 0; i < 120; ++i) data.push_back(test::randomGroundTriple(rng));
	st.insertBatch(data);
	// Exhaustive wildcard combinations via random patterns.
	for (int i = 0; i < 200; ++i) {
		Pattern p = randomPattern(st, rng);
		std::vector<Triple> expected = scanMatch(st, p);
		CHECK(st.match(p) == expected);
		CHECK(st.countMatches(p) == expected.size());
		CHECK(st.matchVia(IndexKind::Spo, p) == expected);
		CHECK(st.matchVia(IndexKind::Pos, p) == expected);
		CHECK(st.matchVia(IndexKind::Osp, p) == expected);
	}
	// The fully-wild pattern returns everything, sorted.
	std::vector<Triple> all = st.match(Pattern::any());
	CHECK(all.size() == st.size());
	CHECK(std::is_sorted(all.begin(), all.end()));
}

TEST_CASE("match on an empty store") {
	Store st;
	CHECK(st.match(Pattern::any()).empty());
	CHECK(st.countMatches(Pattern::any()) == 0);
	CHECK(st.matchGraph(Graph{}).size() == 1);  // one empty solution
}

TEST_CASE("binding semantics") {
	Binding b;
	CHECK(b.lookup("x") == nullptr);
	CHECK(b.bind("x", Term::iri("http://e.test/a")));
	REQUIRE(b.lookup("x") != nullptr);
	CHECK(*b.lookup("x") == Term::iri("http://e.test/a"));
	// Rebinding to the same value is fine; to a different value is not.
	CHECK(b.bind("x", Term::iri("http://e.test/a")));
	CHECK(!b.bind("x", Term::iri("http://e.test/b")));
	CHECK(b.size() == 1);
}

TEST_CASE("unification: lists elementwise, blanks only themselves") {
	Binding b;
	Term pat = Term::list({Term::variable("h"), Term::variable("t")});
	Term val = Term::list({Term::integer(1), Term::str("x")});
	CHECK(unifyTerm(pat, val, b));
	CHECK(*b.lookup("h") == Term::integer(1));
	CHECK(*b.lookup("t") == Term::str("x"));
	Binding b2;
	CHECK(!unifyTerm(Term::list({Term::variable("h")}), val, b2));  // length mismatch
	Binding b3;
	CHECK(unifyTerm(Term::blank("n"), Term::blank("n"), b3));
	CHECK(!unifyTerm(Term::blank("n"), Term::blank("m"), b3));
	CHECK(!unifyTerm(Term::blank("n"), Term::iri("http://e.test/n"), b3));
	// Shared variable must take one value.
	Binding b4;
	Term pat2 = Term::list({Term::variable("v"), Term::variable("v")});
	CHECK(unifyTerm(pat2, Term::list({Term::integer(2), Term::integer(2)}), b4));
	Binding b5;
	CHECK(!unifyTerm(pat2, Term::list({Term::integer(2), Term::integer(3)}), b5));
}

TEST_CASE("substitution recurses into lists and keeps unbound variables") {
	Binding b;
	b.bind("x", Term::integer(7));
	Term t = Term::list({Term::variable("x"), Term::variable("y"),
		Term::list({Term::variable("x")})});
	Term expected = Term::list({Term::integer(7), Term::variable("y"),
		Term::list({Term::integer(7)})});
	CHECK(substituteTerm(t, b) == expected);
}

TEST_CASE("matchGraph agrees with a naive join on random patterns") {
	test::Rng rng(31002);
	for (int round = 0; round < 25; ++round) {
		Store st;
		std::vector<Triple> data;
		int n = 5 + static_cast<int>(test::pick(rng, 40));
		for (int i = 0; i < n; ++i) {
			// Small vocabulary so joins actually connect.
			Term s = test::vocTerm(rng, 4);
			Term p = test::vocPred(rng, 3);
			Term o = test::chance(rng, 0.7) ? test::vocTerm(rng, 4)
											: Term::integer(static_cast<int>(test::pick(rng, 3)));
			data.push_back(Triple{s, p, o});
		}
		st.insertBatch(data);
		Graph pattern;
		int atoms = 1 + static_cast<int>(test::pick(rng, 3));
		for (int i = 0; i < atoms; ++i) {
			auto pos = [&rng](int k) -> Term {
				if (test::chance(rng, 0.5))
					return Term::variable("v" + std::to_string(test::pick(rng, 3)));
				return k == 1 ? test::vocPred(rng, 3) : test::vocTerm(rng, 4);
			};
			pattern.insert(Triple{pos(0), pos(1), pos(2)});
		}
		CHECK(st.matchGraph(pattern) == scanJoin(st, pattern));
	}
}

TEST_CASE("matchGraph with blanks and shared variables") {
	Store st;
	st.loadDocument(parseDocument("@prefix ex: <http://e.test/> .\n"
								  "_:b1 ex:p ex:k . _:b2 ex:p ex:k .\n"
								  "_:b1 ex:q 1 .\n"),
		"t", /*renameBlanks=*/false);
	// A blank in the pattern matches only the identical blank node.
	Graph g1(std::vector<Triple>{
		Triple{Term::blank("b1"), Term::iri("http://e.test/p"), Term::variable("o")}});
	std::vector<Binding> r1 = st.matchGraph(g1);
	REQUIRE(r1.size() == 1);
	CHECK(*r1[0].lookup("o") == Term::iri("http://e.test/k"));
	// Shared variable joins across atoms.
	Graph g2(std::vector<Triple>{
		Triple{Term::variable("s"), Term::iri("http://e.test/p"), Term::iri("http://e.test/k")},
		Triple{Term::variable("s"), Term::iri("http://e.test/q"), Term::variable("n")}});
	std::vector<Binding> r2 = st.matchGraph(g2);
	REQUIRE(r2.size() == 1);
	CHECK(*r2[0].lookup("s") == Term::blank("b1"));
	// Variable predicate enumerates properties.
	Graph g3(std::vector<Triple>{
		Triple{Term::blank("b1"), Term::variable("p"), Term::variable("o")}});
	CHECK(st.matchGraph(g3).size() == 2);
}

TEST_CASE("snapshots are stable prefix views") {
	Store st;
	st.insertBatch({tr("a", "p", "1")});
	st.insertBatch({tr("b", "p", "2")});
	Snapshot snap = st.snapshot();
	CHECK(snap.size() == 2);
	CHECK(snap.generation() == 2);
	st.insertBatch({tr("c", "p", "3"), tr("d", "p", "4")});
	CHECK(st.size() == 4);
	CHECK(snap.size() == 2);
	CHECK(snap.generation() == 2);
	CHECK(snap.contains(tr("a", "p", "1")));
	CHECK(!snap.contains(tr("c", "p", "3")));
	Pattern all = Pattern::any();
	CHECK(snap.match(all).size() == 2);
	CHECK(snap.countMatches(all) == 2);
	Pattern pc;
	pc.subject = Term::iri("http://e.test/c");
	CHECK(snap.match(pc).empty());
	CHECK(st.match(pc).size() == 1);
}

TEST_CASE("loadDocument renames blanks with a sanitized document tag") {
	Store st;
	Document doc = parseDocument(
		"@prefix ex: <http://e.test/> .\n"
		"_:n ex:p ex:o . ex:s ex:q [ ex:r 1 ] .\n");
	CHECK(st.loadDocument(doc, "my-file.n3") == 3);
	CHECK(st.contains(Triple{Term::blank("gmy_file_n3_n"), Term::iri("http://e.test/p"),
		Term::iri("http://e.test/o")}));
	CHECK(st.contains(Triple{Term::blank("gmy_file_n3_anon1"), Term::iri("http://e.test/r"),
		Term::integer(1)}));
	// Same doc under a different tag: blanks stay distinct, nothing collides.
	CHECK(st.loadDocument(doc, "other") == 3);
	CHECK(st.size() == 6);
	// Verbatim load keeps the original labels (and dedups against itself).
	CHECK(st.loadDocument(doc, "ignored", /*renameBlanks=*/false) == 3);
	CHECK(st.contains(Triple{Term::blank("n"), Term::iri("http://e.test/p"),
		Term::iri("http://e.test/o")}));
	CHECK(st.loadDocument(doc, "ignored", /*renameBlanks=*/false) == 0);
}

TEST_CASE("loadDocument ignores rules") {
	Store st;
	Document doc = parseDocument(
		"@prefix ex: <http://e.test/> .\n"
		"ex:s ex:p ex:o .\n"
		"{ ?s ex:p ?o } => { ?s ex:derived ?o } .\n");
	CHECK(st.loadDocument(doc, "t") == 1);
	CHECK(st.size() == 1);
}

TEST_CASE("property: random interleavings keep indexes consistent") {
	test::Rng rng(31003);
	Store st;
	std::vector<Triple> shadow;
	for (int step = 0; step < 30; ++step) {
		std::vector<Triple> batch;
		std::size_t n = test::pick(rng, 6);
		for (std::size_t i = 0; i < n; ++i) {
			// Mix fresh and already-inserted triples.
			if (!shadow.empty() && test::chance(rng, 0.3))
				batch.push_back(shadow[test::pick(rng, shadow.size())]);
			else
				batch.push_back(test::randomGroundTriple(rng));
		}
		std::set<Triple> seen(shadow.begin(), shadow.end());
		std::size_t sizeBefore = seen.size();
		std::size_t added = st.insertBatch(batch);
		for (const Triple& t : batch)
			if (seen.insert(t).second) shadow.push_back(t);
		CHECK(st.size() == seen.size());
		CHECK(added == seen.size() - sizeBefore);
		Pattern p = randomPattern(st, rng);
		CHECK(st.match(p) == scanMatch(st, p));
	}
	CHECK(st.size() == std::set<Triple>(shadow.begin(), shadow.end()).size());
}
