#include "qosflow/builtins.hpp"

#include <algorithm>

#include "qosflow/numeric.hpp"

namespace qosflow {

BuiltinTypeError::BuiltinTypeError(std::string pred, const Term& subj, const std::string& msg)
	: std::runtime_error(pred + ": " + msg + " (subject " + subj.debugString() + ")"),
	  predicate(std::move(pred)),
	  subject(subj) {}

namespace {

constexpr std::string_view kMathNs = "http://www.w3.org/2000/10/swap/math#";
constexpr std::string_view kListNs = "http://www.w3.org/2000/10/swap/list#";

const std::vector<Term>& requireList(const Term& s, const char* pred) {
	if (!s.isList()) throw BuiltinTypeError(pred, s, "subject must be a list");
	return s.elements();
}

NumericValue numericElement(const Term& t, const Term& subject, const char* pred) {
	if (!isNumericLiteral(t))
		throw BuiltinTypeError(pred, subject, "non-numeric element " + t.debugString());
	return parseNumeric(t);
}

std::vector<Term> mathProduct(const Term& s) {
	NumericValue acc{BigInt(1)};
	for (const Term& e : requireList(s, "math:product"))
		acc = acc * numericElement(e, s, "math:product");
	return {formatNumeric(acc)};
}

std::vector<Term> mathSum(const Term& s) {
	NumericValue acc{BigInt(0)};
	for (const Term& e : requireList(s, "math:sum")) acc = acc + numericElement(e, s, "math:sum");
	return {formatNumeric(acc)};
}

// Left fold from the first element; an empty list has no first operand.
std::vector<Term> mathDifference(const Term& s) {
	const auto& elems = requireList(s, "math:difference");
	if (elems.empty()) throw BuiltinTypeError("math:difference", s, "empty operand list");
	NumericValue acc = numericElement(elems[0], s, "math:difference");
	for (std::size_t i = 1; i < elems.size(); ++i)
		acc = acc - numericElement(elems[i], s, "math:difference");
	return {formatNumeric(acc)};
}

std::vector<Term> mathQuotient(const Term& s) {
	const auto& elems = requireList(s, "math:quotient");
	if (elems.empty()) throw BuiltinTypeError("math:quotient", s, "empty operand list");
	NumericValue acc = numericElement(elems[0], s, "math:quotient");
	for (std::size_t i = 1; i < elems.size(); ++i)
		acc = acc / numericElement(elems[i], s, "math:quotient");  // may throw DivisionByZero
	return {formatNumeric(acc)};
}

std::vector<Term> listMember(const Term& s) {
	std::vector<Term> out = requireList(s, "list:member");
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

std::vector<Term> listAppend(const Term& s) {
	std::vector<Term> flat;
	for (const Term& e : requireList(s, "list:append")) {
		if (!e.isList())
			throw BuiltinTypeError("list:append", s, "non-list element " + e.debugString());
		flat.insert(flat.end(), e.elements().begin(), e.elements().end());
	}
	return {Term::list(std::move(flat))};
}

std::vector<Term> listLength(const Term& s) {
	return {Term::integer(static_cast<long long>(requireList(s, "list:length").size()))};
}

// first/rest of the empty list have no solution (not an error), mirroring
// list:member on ().
std::vector<Term> listFirst(const Term& s) {
	const auto& elems = requireList(s, "list:first");
	if (elems.empty()) return {};
	return {elems.front()};
}

std::vector<Term> listRest(const Term& s) {
	const auto& elems = requireList(s, "list:rest");
	if (elems.empty()) return {};
	return {Term::list(std::vector<Term>(elems.begin() + 1, elems.end()))};
}

}  // namespace

void BuiltinRegistry::add(std::string predicateIri, BuiltinFn fn) {
	fns_[std::move(predicateIri)] = fn;
}

bool BuiltinRegistry::contains(const std::string& predicateIri) const {
	return fns_.count(predicateIri) > 0;
}

BuiltinFn BuiltinRegistry::find(const std::string& predicateIri) const {
	auto it = fns_.find(predicateIri);
	return it == fns_.end() ? nullptr : it->second;
}

const BuiltinRegistry& BuiltinRegistry::standard() {
	static const BuiltinRegistry reg = [] {
		BuiltinRegistry r;
		std::string math(kMathNs), list(kListNs);
		r.add(math + "product", mathProduct);
		r.add(math + "sum", mathSum);
		r.add(math + "difference", mathDifference);
		r.add(math + "quotient", mathQuotient);
		r.add(list + "member", listMember);
		r.add(list + "append", listAppend);
		r.add(list + "length", listLength);
		r.add(list + "first", listFirst);
		r.add(list + "rest", listRest);
		return r;
	}();
	return reg;
}

}  // namespace qosflow
