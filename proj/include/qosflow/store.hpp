#ifndef QOSFLOW_STORE_HPP
#define QOSFLOW_STORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qosflow/document.hpp"
#include "qosflow/term.hpp"

namespace qosflow {

struct VariableInData : std::runtime_error {
	explicit VariableInData(const Triple& t);
	Triple triple;
};

// Query pattern; an empty position is a wildcard. Bound positions must be
// ground terms.
struct Pattern {
	std::optional<Term> subject;
	std::optional<Term> predicate;
	std::optional<Term> object;

	static Pattern any() { return {}; }
};

// Variable assignment built up during matching. Ordered by name so equal
// bindings compare equal and sets of bindings sort deterministically.
class Binding {
public:
	const Term* lookup(const std::string& name) const;
	// False iff the variable is already bound to a different term.
	bool bind(const std::string& name, const Term& value);
	std::size_t size() const { return map_.size(); }
	auto begin() const { return map_.begin(); }
	auto end() const { return map_.end(); }
	bool operator==(const Binding& other) const { return map_ == other.map_; }
	bool operator<(const Binding& other) const;

private:
	std::map<std::string, Term> map_;
};

// Replaces variables by their bound terms (recursing into lists); unbound
// variables stay in place.
Term substituteTerm(const Term& t, const Binding& b);
Triple substituteTriple(const Triple& t, const Binding& b);

// Matches a pattern term against a ground term, extending the binding.
// Lists unify elementwise. Blank nodes and all other non-variable terms
// match only themselves.
bool unifyTerm(const Term& pattern, const Term& value, Binding& b);
bool unifyTriple(const Triple& pattern, const Triple& value, Binding& b);

enum class IndexKind { Spo, Pos, Osp };

class Snapshot;

// Append-only indexed triple store. There is no delete: retraction is out of
// scope and newest-wins consumers use per-triple generations instead. One
// writer at a time; snapshots give readers a stable prefix view.
class Store {
public:
	Store() = default;

	// Adds all triples not yet present as one generation. Returns the number
	// actually added; the generation counter moves only when that is > 0.
	// Throws VariableInData (before any mutation) if a triple is non-ground.
	std::size_t insertBatch(const std::vector<Triple>& batch);

	bool contains(const Triple& t) const { return ids_.count(t) > 0; }
	std::size_t size() const { return triples_.size(); }
	std::uint64_t generation() const { return generation_; }
	// Generation that introduced the triple; 0 when absent.
	std::uint64_t generationOf(const Triple& t) const;

	// Triples in insertion order.
	const std::vector<Triple>& triples() const { return triples_; }

	// All matches, sorted by tripleCompare.
	std::vector<Triple> match(const Pattern& p) const;
	// Same result forced through one index family; consistency test hook.
	std::vector<Triple> matchVia(IndexKind kind, const Pattern& p) const;
	// Exact result size of match(p) without materializing it.
	std::size_t countMatches(const Pattern& p) const;

	// Solutions of a conjunctive pattern (variables shared across triples),
	// sorted. Blank nodes in the pattern match only themselves.
	std::vector<Binding> matchGraph(const Graph& pattern) const;

	Snapshot snapshot() const;

	// Loads a document's triples as one batch, renaming blank labels with a
	// document-scoped prefix so labels from different files never collide.
	// Rules in the document are ignored. Returns triples added.
	std::size_t loadDocument(const Document& doc, const std::string& docTag,
		bool renameBlanks = true);

private:
	friend class Snapshot;

	std::vector<Triple> matchLimit(const Pattern& p, std::size_t limit) const;
	std::size_t countLimit(const Pattern& p, std::size_t limit) const;

	using Bucket = std::vector<std::uint32_t>;
	using Inner = std::unordered_map<Term, Bucket, TermHash>;
	using Index = std::unordered_map<Term, Inner, TermHash>;

	std::vector<Triple> triples_;
	std::vector<std::uint64_t> gens_;
	std::unordered_map<Triple, std::uint32_t, TripleHash> ids_;
	Index spo_;  // S -> P -> ids
	Index pos_;  // P -> O -> ids
	Index osp_;  // O -> S -> ids
	std::uint64_t generation_ = 0;
};

// Immutable prefix view of a store: triples present when the snapshot was
// taken. Valid only while the store outlives it and is not copied from under
// it; later inserts are invisible.
class Snapshot {
public:
	std::size_t size() const { return count_; }
	std::uint64_t generation() const { return generation_; }
	bool contains(const Triple& t) const;
	std::vector<Triple> match(const Pattern& p) const;
	std::size_t countMatches(const Pattern& p) const;

private:
	friend class Store;
	Snapshot(const Store* s, std::size_t count, std::uint64_t gen)
		: store_(s), count_(count), generation_(gen) {}

	const Store* store_;
	std::size_t count_;
	std::uint64_t generation_;
};

}  // namespace qosflow

#endif  // QOSFLOW_STORE_HPP
