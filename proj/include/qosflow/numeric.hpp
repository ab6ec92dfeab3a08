#ifndef QOSFLOW_NUMERIC_HPP
#define QOSFLOW_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <variant>

#include "qosflow/term.hpp"

namespace qosflow {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct NonNumericLiteral : std::runtime_error {
	explicit NonNumericLiteral(const Term& term);
	Term term;
};

struct DivisionByZero : std::runtime_error {
	DivisionByZero() : std::runtime_error("division by zero") {}
};

// Numeric tower: xsd:integer and xsd:decimal stay exact (arbitrary
// precision); any operand typed xsd:double poisons the result to double.
// integer/integer division promotes to the exact rational (decimal) kind.
class NumericValue {
public:
	NumericValue() : value_(BigInt(0)) {}
	explicit NumericValue(BigInt v) : value_(std::move(v)) {}
	explicit NumericValue(BigRational v);
	explicit NumericValue(double v) : value_(v) {}

	bool isInteger() const { return std::holds_alternative<BigInt>(value_); }
	bool isDecimal() const { return std::holds_alternative<BigRational>(value_); }
	bool isDouble() const { return std::holds_alternative<double>(value_); }
	bool isExact() const { return !isDouble(); }

	const BigInt& asInteger() const { return std::get<BigInt>(value_); }
	const BigRational& asDecimal() const { return std::get<BigRational>(value_); }
	double toDouble() const;

	NumericValue operator+(const NumericValue& rhs) const;
	NumericValue operator-(const NumericValue& rhs) const;
	NumericValue operator*(const NumericValue& rhs) const;
	NumericValue operator/(const NumericValue& rhs) const;  // throws DivisionByZero

	// Numeric equality across kinds (2 == 2.0); doubles compare as doubles.
	bool operator==(const NumericValue& rhs) const;
	bool operator!=(const NumericValue& rhs) const { return !(*this == rhs); }

private:
	std::variant<BigInt, BigRational, double> value_;
};

// Reads a numeric literal. Throws NonNumericLiteral for any other term or a
// malformed lexical form.
NumericValue parseNumeric(const Term& literal);
bool isNumericLiteral(const Term& term);

// Canonical literal for a value. Integers print as plain digits; decimals as
// terminating decimal strings (always with a fraction digit); results whose
// exact value has no terminating decimal form degrade to an xsd:double
// literal. parseNumeric(formatNumeric(v)) == v for exact terminating values.
Term formatNumeric(const NumericValue& v);

// Canonical lexical for a raw double (shortest round-trip scientific form).
std::string doubleLexical(double v);

}  // namespace qosflow

#endif  // QOSFLOW_NUMERIC_HPP
