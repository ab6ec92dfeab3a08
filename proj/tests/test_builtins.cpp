// Tests for the builtin registry: exact math over lists, list primitives,
// and the distinction between "no solution" and a type error.
#include <doctest.h>

#include <string>
#include <vector>

#include "qosflow/builtins.hpp"
#include "qosflow/numeric.hpp"
#include "qosflow/term.hpp"
#include "test_util.hpp"

using namespace qosflow;

namespace {

const std::string kMath = "http://www.w3.org/2000/10/swap/math#";
const std::string kList = "http://www.w3.org/2000/10/swap/list#";

std::vector<Term> call(const std::string& pred, const Term& subject) {
	BuiltinFn fn = BuiltinRegistry::standard().find(pred);
	REQUIRE(fn != nullptr);
	return fn(subject);
}

Term nums(std::initializer_list<const char*> lexicals, const char* dt) {
	std::vector<Term> elems;
	for (const char* l : lexicals) elems.push_back(Term::literal(l, dt));
	return Term::list(std::move(elems));
}

}  // namespace

TEST_CASE("registry lookup") {
	const BuiltinRegistry& reg = BuiltinRegistry::standard();
	for (const char* name : {"product", "sum", "difference", "quotient"})
		CHECK(reg.contains(kMath + name));
	for (const char* name : {"member", "append", "length", "first", "rest"})
		CHECK(reg.contains(kList + name));
	CHECK(!reg.contains(kMath + "exponentiation"));
	CHECK(reg.find(kMath + "nope") == nullptr);
	BuiltinRegistry custom;
	custom.add("http://e.test/id", [](const Term& s) { return std::vector<Term>{s}; });
	CHECK(custom.contains("http://e.test/id"));
	CHECK(!custom.contains(kMath + "sum"));
}

TEST_CASE("math builtins compute exactly") {
	const char* kInt = "http://www.w3.org/2001/XMLSchema#integer";
	const char* kDec = "http://www.w3.org/2001/XMLSchema#decimal";
	CHECK(call(kMath + "product", nums({"3", "4", "5"}, kInt))
		== std::vector<Term>{Term::literal("60", kInt)});
	CHECK(call(kMath + "sum", nums({"0.1", "0.2"}, kDec))
		== std::vector<Term>{Term::literal("0.3", kDec)});
	CHECK(call(kMath + "difference", nums({"10", "3", "2"}, kInt))
		== std::vector<Term>{Term::literal("5", kInt)});
	// Integer division promotes to the exact decimal kind.
	CHECK(call(kMath + "quotient", nums({"10", "4"}, kInt))
		== std::vector<Term>{Term::literal("2.5", kDec)});
	// Identity elements for the empty list.
	CHECK(call(kMath + "product", Term::list({}))
		== std::vector<Term>{Term::literal("1", kInt)});
	CHECK(call(kMath + "sum", Term::list({}))
		== std::vector<Term>{Term::literal("0", kInt)});
	// Mixed integer/decimal stays exact; (1 - 0.95) * 1920 * 1080 * 30.
	Term subject = Term::list({
		call(kMath + "difference", nums({"1", "0.95"}, kDec)).front(),
		Term::literal("1920", kInt), Term::literal("1080", kInt),
		Term::literal("30", kInt)});
	std::vector<Term> r = call(kMath + "product", subject);
	REQUIRE(r.size() == 1);
	CHECK(parseNumeric(r.front()) == NumericValue(BigInt(3110400)));
}

TEST_CASE("math builtins: errors") {
	Term notList = Term::integer(5);
	for (const char* name : {"product", "sum", "difference", "quotient"}) {
		try {
			call(kMath + name, notList);
			FAIL("expected BuiltinTypeError");
		} catch (const BuiltinTypeError& e) {
			// The error carries the short prefixed form for readability.
			CHECK(e.predicate == std::string("math:") + name);
			CHECK(e.subject == notList);
		}
	}
	Term withString = Term::list({Term::integer(1), Term::str("two")});
	for (const char* name : {"product", "sum", "difference", "quotient"})
		CHECK_THROWS_AS(call(kMath + name, withString), BuiltinTypeError);
	// difference/quotient need a first operand.
	CHECK_THROWS_AS(call(kMath + "difference", Term::list({})), BuiltinTypeError);
	CHECK_THROWS_AS(call(kMath + "quotient", Term::list({})), BuiltinTypeError);
	// Division by zero surfaces as DivisionByZero, not a type error.
	const char* kInt = "http://www.w3.org/2001/XMLSchema#integer";
	CHECK_THROWS_AS(call(kMath + "quotient", nums({"1", "0"}, kInt)), DivisionByZero);
	// Booleans and plain strings are not numeric even when they look like it.
	CHECK_THROWS_AS(call(kMath + "sum", Term::list({Term::str("3")})), BuiltinTypeError);
	CHECK_THROWS_AS(call(kMath + "sum", Term::list({Term::boolean(true)})), BuiltinTypeError);
}

TEST_CASE("list:member enumerates distinct elements") {
	Term subject = Term::list({Term::integer(2), Term::str("a"), Term::integer(2),
		Term::list({Term::integer(1)})});
	std::vector<Term> out = call(kList + "member", subject);
	CHECK(out.size() == 3);  // duplicate collapsed
	CHECK(call(kList + "member", Term::list({})).empty());
	CHECK_THROWS_AS(call(kList + "member", Term::str("x")), BuiltinTypeError);
}

TEST_CASE("list:append concatenates lists of lists") {
	Term subject = Term::list({
		Term::list({Term::integer(1), Term::integer(2)}),
		Term::list({}),
		Term::list({Term::str("x")})});
	std::vector<Term> out = call(kList + "append", subject);
	REQUIRE(out.size() == 1);
	CHECK(out.front() == Term::list({Term::integer(1), Term::integer(2), Term::str("x")}));
	CHECK(call(kList + "append", Term::list({})).front() == Term::list({}));
	CHECK_THROWS_AS(call(kList + "append", Term::list({Term::integer(1)})),
		BuiltinTypeError);
}

TEST_CASE("list:length, list:first, list:rest") {
	Term abc = Term::list({Term::str("a"), Term::str("b"), Term::str("c")});
	CHECK(call(kList + "length", abc).front() == Term::integer(3));
	CHECK(call(kList + "length", Term::list({})).front() == Term::integer(0));
	CHECK(call(kList + "first", abc).front() == Term::str("a"));
	CHECK(call(kList + "rest", abc).front()
		== Term::list({Term::str("b"), Term::str("c")}));
	CHECK(call(kList + "rest", Term::list({Term::str("a")})).front() == Term::list({}));
	// first/rest of the empty list: no solution, NOT an error.
	CHECK(call(kList + "first", Term::list({})).empty());
	CHECK(call(kList + "rest", Term::list({})).empty());
	CHECK_THROWS_AS(call(kList + "first", Term::iri("http://e.test/x")), BuiltinTypeError);
}

TEST_CASE("property: sum/product agree with a fold over random numerics") {
	test::Rng rng(60311);
	for (int i = 0; i < 100; ++i) {
		std::vector<Term> elems;
		std::size_t n = test::pick(rng, 6);
		NumericValue sum{BigInt(0)};
		NumericValue prod{BigInt(1)};
		bool sawDouble = false;
		for (std::size_t k = 0; k < n; ++k) {
			Term t = test::randomNumeric(rng);
			NumericValue v = parseNumeric(t);
			sawDouble = sawDouble || v.isDouble();
			sum = sum + v;
			prod = prod * v;
			elems.push_back(t);
		}
		Term subject = Term::list(std::move(elems));
		CHECK(call(kMath + "sum", subject).front() == formatNumeric(sum));
		CHECK(call(kMath + "product", subject).front() == formatNumeric(prod));
		// Exactness: absent doubles, results stay in the exact tower.
		if (!sawDouble) {
			CHECK(parseNumeric(call(kMath + "sum", subject).front()).isExact());
			CHECK(parseNumeric(call(kMath + "product", subject).front()).isExact());
		}
	}
}
