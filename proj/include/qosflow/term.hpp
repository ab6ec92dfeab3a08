#ifndef QOSFLOW_TERM_HPP
#define QOSFLOW_TERM_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qosflow {

// Well-known datatype IRIs. Literals always carry a datatype; plain strings
// carry xsd:string.
namespace xsd {
inline constexpr std::string_view kString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
}  // namespace xsd

enum class TermKind : std::uint8_t { Iri, Blank, Literal, Variable, List };

// Immutable RDF term. Copying is a refcount bump; structural equality with a
// cached hash. Variables never appear in asserted data, only in rule graphs.
class Term {
public:
	Term();  // empty IRI; placeholder for containers

	static Term iri(std::string value);
	static Term blank(std::string label);
	static Term literal(std::string lexical, std::string datatype);
	static Term str(std::string value);  // xsd:string literal
	static Term integer(long long value);
	static Term boolean(bool value);
	static Term variable(std::string name);
	static Term list(std::vector<Term> elements);

	TermKind kind() const { return data_->kind; }
	bool isIri() const { return kind() == TermKind::Iri; }
	bool isBlank() const { return kind() == TermKind::Blank; }
	bool isLiteral() const { return kind() == TermKind::Literal; }
	bool isVariable() const { return kind() == TermKind::Variable; }
	bool isList() const { return kind() == TermKind::List; }

	// IRI string / blank label / literal lexical form / variable name.
	const std::string& value() const { return data_->value; }
	// Literal datatype IRI; empty for other kinds.
	const std::string& datatype() const { return data_->datatype; }
	// List elements; empty for other kinds.
	const std::vector<Term>& elements() const { return data_->elements; }

	// False iff a Variable occurs anywhere inside this term.
	bool isGround() const { return data_->ground; }

	std::size_t hash() const { return data_->hash; }

	bool operator==(const Term& other) const;
	bool operator!=(const Term& other) const { return !(*this == other); }

	// N3-ish rendering for diagnostics (not the canonical serializer).
	std::string debugString() const;

private:
	struct Data {
		TermKind kind;
		std::string value;
		std::string datatype;
		std::vector<Term> elements;
		std::size_t hash = 0;
		bool ground = true;
	};

	explicit Term(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
	static Term make(Data d);

	std::shared_ptr<const Data> data_;
};

// Total order over terms: Iri < Blank < Literal < List < Variable, within a
// kind lexicographic (literals by datatype then lexical, lists elementwise
// then by length). Deterministic across runs.
int termCompare(const Term& a, const Term& b);

inline bool operator<(const Term& a, const Term& b) { return termCompare(a, b) < 0; }

struct TermHash {
	std::size_t operator()(const Term& t) const { return t.hash(); }
};

struct Triple {
	Term subject;
	Term predicate;
	Term object;

	bool operator==(const Triple& other) const {
		return subject == other.subject && predicate == other.predicate && object == other.object;
	}
	bool operator!=(const Triple& other) const { return !(*this == other); }
};

int tripleCompare(const Triple& a, const Triple& b);
inline bool operator<(const Triple& a, const Triple& b) { return tripleCompare(a, b) < 0; }

struct TripleHash {
	std::size_t operator()(const Triple& t) const;
};

// Deduplicated set of triples with deterministic (termCompare) iteration.
class Graph {
public:
	Graph() = default;
	explicit Graph(std::vector<Triple> triples);

	bool insert(const Triple& t) { return triples_.insert(t).second; }
	bool contains(const Triple& t) const { return triples_.count(t) > 0; }
	std::size_t size() const { return triples_.size(); }
	bool empty() const { return triples_.empty(); }

	auto begin() const { return triples_.begin(); }
	auto end() const { return triples_.end(); }

	bool operator==(const Graph& other) const { return triples_ == other.triples_; }
	bool operator!=(const Graph& other) const { return !(*this == other); }

private:
	std::set<Triple> triples_;
};

}  // namespace qosflow

#endif  // QOSFLOW_TERM_HPP
