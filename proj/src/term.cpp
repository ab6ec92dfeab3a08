#include "qosflow/term.hpp"

#include <algorithm>
#include <functional>

namespace qosflow {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnvBytes(std::uint64_t h, std::string_view s) {
	for (unsigned char c : s) {
		h ^= c;
		h *= kFnvPrime;
	}
	return h;
}

std::uint64_t fnvValue(std::uint64_t h, std::uint64_t v) {
	for (int i = 0; i < 8; ++i) {
		h ^= (v >> (i * 8)) & 0xff;
		h *= kFnvPrime;
	}
	return h;
}

int kindRank(TermKind k) {
	switch (k) {
		case TermKind::Iri: return 0;
		case TermKind::Blank: return 1;
		case TermKind::Literal: return 2;
		case TermKind::List: return 3;
		case TermKind::Variable: return 4;
	}
	return 5;
}

int cmp(std::string_view a, std::string_view b) {
	int c = a.compare(b);
	return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

Term::Term() {
	static const std::shared_ptr<const Data> empty = [] {
		auto d = std::make_shared<Data>();
		d->kind = TermKind::Iri;
		d->hash = fnvValue(kFnvOffset, 0);
		return d;
	}();
	data_ = empty;
}

Term Term::make(Data d) {
	std::uint64_t h = fnvValue(kFnvOffset, static_cast<std::uint64_t>(d.kind));
	h = fnvBytes(h, d.value);
	h = fnvBytes(h, d.datatype);
	for (const Term& e : d.elements) {
		h = fnvValue(h, e.hash());
		d.ground = d.ground && e.isGround();
	}
	if (d.kind == TermKind::Variable) d.ground = false;
	d.hash = static_cast<std::size_t>(h);
	return Term(std::make_shared<const Data>(std::move(d)));
}

Term Term::iri(std::string value) {
	Data d;
	d.kind = TermKind::Iri;
	d.value = std::move(value);
	return make(std::move(d));
}

Term Term::blank(std::string label) {
	Data d;
	d.kind = TermKind::Blank;
	d.value = std::move(label);
	return make(std::move(d));
}

Term Term::literal(std::string lexical, std::string datatype) {
	Data d;
	d.kind = TermKind::Literal;
	d.value = std::move(lexical);
	d.datatype = std::move(datatype);
	return make(std::move(d));
}

Term Term::str(std::string value) {
	return literal(std::move(value), std::string(xsd::kString));
}

Term Term::integer(long long value) {
	return literal(std::to_string(value), std::string(xsd::kInteger));
}

Term Term::boolean(bool value) {
	return literal(value ? "true" : "false", std::string(xsd::kBoolean));
}

Term Term::variable(std::string name) {
	Data d;
	d.kind = TermKind::Variable;
	d.value = std::move(name);
	return make(std::move(d));
}

Term Term::list(std::vector<Term> elements) {
	Data d;
	d.kind = TermKind::List;
	d.elements = std::move(elements);
	return make(std::move(d));
}

bool Term::operator==(const Term& other) const {
	if (data_ == other.data_) return true;
	if (data_->hash != other.data_->hash) return false;
	if (data_->kind != other.data_->kind) return false;
	if (data_->value != other.data_->value) return false;
	if (data_->datatype != other.data_->datatype) return false;
	return data_->elements == other.data_->elements;
}

std::string Term::debugString() const {
	switch (kind()) {
		case TermKind::Iri: return "<" + value() + ">";
		case TermKind::Blank: return "_:" + value();
		case TermKind::Variable: return "?" + value();
		case TermKind::Literal:
			if (datatype() == xsd::kString) return "\"" + value() + "\"";
			return "\"" + value() + "\"^^<" + datatype() + ">";
		case TermKind::List: {
			std::string out = "(";
			for (std::size_t i = 0; i < elements().size(); ++i) {
				if (i) out += ' ';
				out += elements()[i].debugString();
			}
			out += ')';
			return out;
		}
	}
	return "<?>";
}

int termCompare(const Term& a, const Term& b) {
	if (&a == &b || a == b) return 0;
	int ra = kindRank(a.kind());
	int rb = kindRank(b.kind());
	if (ra != rb) return ra < rb ? -1 : 1;
	switch (a.kind()) {
		case TermKind::Iri:
		case TermKind::Blank:
		case TermKind::Variable:
			return cmp(a.value(), b.value());
		case TermKind::Literal: {
			int c = cmp(a.datatype(), b.datatype());
			if (c) return c;
			return cmp(a.value(), b.value());
		}
		case TermKind::List: {
			const auto& ea = a.elements();
			const auto& eb = b.elements();
			std::size_t n = std::min(ea.size(), eb.size());
			for (std::size_t i = 0; i < n; ++i) {
				int c = termCompare(ea[i], eb[i]);
				if (c) return c;
			}
			if (ea.size() != eb.size()) return ea.size() < eb.size() ? -1 : 1;
			return 0;
		}
	}
	return 0;
}

int tripleCompare(const Triple& a, const Triple& b) {
	int c = termCompare(a.subject, b.subject);
	if (c) return c;
	c = termCompare(a.predicate, b.predicate);
	if (c) return c;
	return termCompare(a.object, b.object);
}

std::size_t TripleHash::operator()(const Triple& t) const {
	std::uint64_t h = fnvValue(kFnvOffset, t.subject.hash());
	h = fnvValue(h, t.predicate.hash());
	h = fnvValue(h, t.object.hash());
	return static_cast<std::size_t>(h);
}

Graph::Graph(std::vector<Triple> triples) : triples_(triples.begin(), triples.end()) {}

}  // namespace qosflow
