#include "qosflow/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace qosflow {
namespace {

namespace mp = boost::multiprecision;

bool allDigits(std::string_view s) {
	if (s.empty()) return false;
	for (char c : s) {
		if (c < '0' || c > '9') return false;
	}
	return true;
}

// xsd:integer lexical: optional sign, one or more digits.
// cpp_int's string constructor reads a leading 0 as an octal prefix, so
// feed it digits with the excess zeros stripped.
BigInt digitsToBigInt(std::string_view digits) {
	std::size_t i = 0;
	while (i + 1 < digits.size() && digits[i] == '0') ++i;
	return BigInt(std::string(digits.substr(i)));
}

bool parseIntegerLexical(std::string_view s, BigInt& out) {
	bool neg = false;
	if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
		neg = s[0] == '-';
		s.remove_prefix(1);
	}
	if (!allDigits(s)) return false;
	out = digitsToBigInt(s);
	if (neg) out = -out;
	return true;
}

// xsd:decimal lexical: optional sign, digits with at most one point, at
// least one digit somewhere.
bool parseDecimalLexical(std::string_view s, BigRational& out) {
	bool neg = false;
	if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
		neg = s[0] == '-';
		s.remove_prefix(1);
	}
	auto dot = s.find('.');
	std::string_view ip = dot == std::string_view::npos ? s : s.substr(0, dot);
	std::string_view fp = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
	if (ip.empty() && fp.empty()) return false;
	if (!ip.empty() && !allDigits(ip)) return false;
	if (!fp.empty() && !allDigits(fp)) return false;
	std::string digits;
	digits.append(ip);
	digits.append(fp);
	BigInt num = digits.empty() ? BigInt(0) : digitsToBigInt(digits);
	BigInt den = mp::pow(BigInt(10), static_cast<unsigned>(fp.size()));
	out = BigRational(num, den);
	if (neg) out = -out;
	return true;
}

bool parseDoubleLexical(std::string_view s, double& out) {
	if (s == "INF" || s == "+INF") {
		out = INFINITY;
		return true;
	}
	if (s == "-INF") {
		out = -INFINITY;
		return true;
	}
	if (s == "NaN") {
		out = NAN;
		return true;
	}
	bool neg = false;
	if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
		neg = s[0] == '-';
		s.remove_prefix(1);
	}
	if (s.empty()) return false;
	double v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size()) return false;
	out = neg ? -v : v;
	return true;
}

}  // namespace

NonNumericLiteral::NonNumericLiteral(const Term& t)
	: std::runtime_error("not a numeric literal: " + t.debugString()), term(t) {}

NumericValue::NumericValue(BigRational v) : value_(std::move(v)) {}

double NumericValue::toDouble() const {
	if (isInteger()) return asInteger().convert_to<double>();
	if (isDecimal()) return asDecimal().convert_to<double>();
	return std::get<double>(value_);
}

namespace {

enum class Tower { Int, Rat, Dbl };

Tower towerOf(const NumericValue& a, const NumericValue& b) {
	if (a.isDouble() || b.isDouble()) return Tower::Dbl;
	if (a.isDecimal() || b.isDecimal()) return Tower::Rat;
	return Tower::Int;
}

BigRational ratOf(const NumericValue& v) {
	return v.isInteger() ? BigRational(v.asInteger()) : v.asDecimal();
}

}  // namespace

NumericValue NumericValue::operator+(const NumericValue& rhs) const {
	switch (towerOf(*this, rhs)) {
		case Tower::Int: return NumericValue(asInteger() + rhs.asInteger());
		case Tower::Rat: return NumericValue(ratOf(*this) + ratOf(rhs));
		case Tower::Dbl: return NumericValue(toDouble() + rhs.toDouble());
	}
	return NumericValue();
}

NumericValue NumericValue::operator-(const NumericValue& rhs) const {
	switch (towerOf(*this, rhs)) {
		case Tower::Int: return NumericValue(asInteger() - rhs.asInteger());
		case Tower::Rat: return NumericValue(ratOf(*this) - ratOf(rhs));
		case Tower::Dbl: return NumericValue(toDouble() - rhs.toDouble());
	}
	return NumericValue();
}

NumericValue NumericValue::operator*(const NumericValue& rhs) const {
	switch (towerOf(*this, rhs)) {
		case Tower::Int: return NumericValue(asInteger() * rhs.asInteger());
		case Tower::Rat: return NumericValue(ratOf(*this) * ratOf(rhs));
		case Tower::Dbl: return NumericValue(toDouble() * rhs.toDouble());
	}
	return NumericValue();
}

NumericValue NumericValue::operator/(const NumericValue& rhs) const {
	switch (towerOf(*this, rhs)) {
		case Tower::Int:
		case Tower::Rat: {
			BigRational d = ratOf(rhs);
			if (d == 0) throw DivisionByZero();
			return NumericValue(ratOf(*this) / d);
		}
		case Tower::Dbl: {
			double d = rhs.toDouble();
			if (d == 0.0) throw DivisionByZero();
			return NumericValue(toDouble() / d);
		}
	}
	return NumericValue();
}

bool NumericValue::operator==(const NumericValue& rhs) const {
	if (isDouble() || rhs.isDouble()) return toDouble() == rhs.toDouble();
	return ratOf(*this) == ratOf(rhs);
}

bool isNumericLiteral(const Term& term) {
	if (!term.isLiteral()) return false;
	const std::string& dt = term.datatype();
	return dt == xsd::kInteger || dt == xsd::kDecimal || dt == xsd::kDouble;
}

NumericValue parseNumeric(const Term& literal) {
	if (!literal.isLiteral()) throw NonNumericLiteral(literal);
	const std::string& dt = literal.datatype();
	if (dt == xsd::kInteger) {
		BigInt v;
		if (!parseIntegerLexical(literal.value(), v)) throw NonNumericLiteral(literal);
		return NumericValue(std::move(v));
	}
	if (dt == xsd::kDecimal) {
		BigRational v;
		if (!parseDecimalLexical(literal.value(), v)) throw NonNumericLiteral(literal);
		return NumericValue(std::move(v));
	}
	if (dt == xsd::kDouble) {
		double v = 0;
		if (!parseDoubleLexical(literal.value(), v)) throw NonNumericLiteral(literal);
		return NumericValue(v);
	}
	throw NonNumericLiteral(literal);
}

std::string doubleLexical(double v) {
	if (std::isnan(v)) return "NaN";
	if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
	char buf[64];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
	(void)ec;
	return std::string(buf, ptr);
}

Term formatNumeric(const NumericValue& v) {
	if (v.isInteger()) {
		return Term::literal(v.asInteger().str(), std::string(xsd::kInteger));
	}
	if (v.isDouble()) {
		return Term::literal(doubleLexical(v.toDouble()), std::string(xsd::kDouble));
	}
	const BigRational& r = v.asDecimal();
	BigInt num = mp::numerator(r);
	BigInt den = mp::denominator(r);
	// Terminating decimal iff den == 2^a * 5^b.
	BigInt d = den;
	unsigned twos = 0, fives = 0;
	while (d % 2 == 0) {
		d /= 2;
		++twos;
	}
	while (d % 5 == 0) {
		d /= 5;
		++fives;
	}
	if (d != 1) {
		return Term::literal(doubleLexical(v.toDouble()), std::string(xsd::kDouble));
	}
	unsigned k = std::max(twos, fives);
	BigInt scaled = num * mp::pow(BigInt(10), k) / den;
	bool neg = scaled < 0;
	if (neg) scaled = -scaled;
	std::string digits = scaled.str();
	if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
	std::string ip = digits.substr(0, digits.size() - k);
	std::string fp = digits.substr(digits.size() - k);
	while (fp.size() > 1 && fp.back() == '0') fp.pop_back();
	if (fp.empty()) fp = "0";
	std::string lex = (neg ? "-" : "") + ip + "." + fp;
	return Term::literal(std::move(lex), std::string(xsd::kDecimal));
}

}  // namespace qosflow
