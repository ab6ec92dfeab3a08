// Tests for the vocabulary helpers and the structural validator: builders,
// prefixes, the embedded base vocabulary, every validator check, and the
// device profile view.
#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qosflow/n3_parser.hpp"
#include "qosflow/store.hpp"
#include "qosflow/term.hpp"
#include "qosflow/vocab.hpp"
#include "test_util.hpp"

using namespace qosflow;

namespace {

const std::string kHeader =
	"@prefix rcp: <http://qosflow.dev/vocab/recipe#> .\n"
	"@prefix app: <http://qosflow.dev/vocab/appqos#> .\n"
	"@prefix sdn: <http://qosflow.dev/vocab/sdn#> .\n"
	"@prefix ex: <http://e.test/> .\n";

Store storeOf(const std::string& body) {
	Store st;
	st.loadDocument(parseDocument(kHeader + body), "t", /*renameBlanks=*/false);
	return st;
}

std::vector<Violation> check(const std::string& body) {
	Store st = storeOf(body);
	return validate(st);
}

bool fires(const std::vector<Violation>& vs, const std::string& rule) {
	return std::any_of(vs.begin(), vs.end(), [&rule](const Violation& v) {
		return v.rule == rule;
	});
}

}  // namespace

TEST_CASE("vocabulary term builders") {
	CHECK(vocab::rcp("Recipe") == Term::iri("http://qosflow.dev/vocab/recipe#Recipe"));
	CHECK(vocab::app("minBitrate") == Term::iri("http://qosflow.dev/vocab/appqos#minBitrate"));
	CHECK(vocab::sdn("Tenant") == Term::iri("http://qosflow.dev/vocab/sdn#Tenant"));
	CHECK(vocab::clc("wanted") == Term::iri("http://qosflow.dev/vocab/calc#wanted"));
	CHECK(vocab::rdfType()
		== Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"));
}

TEST_CASE("standardPrefixes covers all namespaces") {
	std::map<std::string, std::string> p = vocab::standardPrefixes();
	CHECK(p.size() == 8);
	CHECK(p.at("rcp") == ns::kRcp);
	CHECK(p.at("app") == ns::kApp);
	CHECK(p.at("sdn") == ns::kSdn);
	CHECK(p.at("clc") == ns::kClc);
	CHECK(p.at("math") == ns::kMath);
	CHECK(p.at("list") == ns::kList);
	CHECK(p.at("rdf") == ns::kRdf);
	CHECK(p.at("xsd") == ns::kXsd);
}

TEST_CASE("baseVocabulary is embedded and well-formed") {
	const Document& v = vocab::baseVocabulary();
	CHECK(!v.triples.empty());
	// Core classes are declared.
	bool sawRecipe = false;
	for (const Triple& t : v.triples)
		sawRecipe = sawRecipe || t.subject == vocab::rcp("Recipe");
	CHECK(sawRecipe);
	// Stable across calls (same parsed object).
	CHECK(&vocab::baseVocabulary() == &v);
}

TEST_CASE("validate: clean stores produce no violations") {
	Store st;
	st.loadDocument(parseFile(test::fixture("camera.n3")), "camera");
	CHECK(validate(st).empty());
	// The empty store is clean too.
	Store empty;
	CHECK(validate(empty).empty());
	// Abstract recipes (constraints without endpoints) are clean.
	CHECK(check("ex:r a rcp:Recipe ; rcp:hasInteraction ex:i .\n"
				"ex:i rcp:hasConstraint ex:c .\n"
				"ex:c app:framesPerSecond 30 .")
			  .empty());
}

TEST_CASE("validate: endpoint-type") {
	// Literal endpoint.
	std::vector<Violation> v1 = check("ex:c rcp:interactionFrom 5 .");
	REQUIRE(fires(v1, "endpoint-type"));
	CHECK(!v1[0].warning);
	CHECK(v1[0].subject == Term::iri("http://e.test/c"));
	// Node endpoint lacking both rcp:Ingredient and rcp:Offering.
	CHECK(fires(check("ex:c rcp:interactionTo ex:cam ."), "endpoint-type"));
	// Typed endpoints pass.
	CHECK(check("ex:c rcp:interactionFrom ex:cam . ex:cam a rcp:Ingredient .").empty());
	CHECK(check("ex:c rcp:interactionTo ex:off . ex:off a rcp:Offering .").empty());
}

TEST_CASE("validate: efficiency-range") {
	CHECK(fires(check("ex:d app:videoEfficiency 1.5 ."), "efficiency-range"));
	CHECK(fires(check("ex:d app:videoEfficiency -0.1 ."), "efficiency-range"));
	CHECK(fires(check("ex:d app:videoEfficiency \"high\" ."), "efficiency-range"));
	CHECK(check("ex:d app:videoEfficiency 0.95 .").empty());
	CHECK(check("ex:d app:videoEfficiency 0 .").empty());
	CHECK(check("ex:d app:videoEfficiency 1 .").empty());
}

TEST_CASE("validate: resolution-positive") {
	CHECK(fires(check("ex:d app:resolutionX 0 ."), "resolution-positive"));
	CHECK(fires(check("ex:d app:resolutionY -4 ."), "resolution-positive"));
	CHECK(fires(check("ex:d app:resolutionX 1920.5 ."), "resolution-positive"));
	CHECK(fires(check("ex:d app:resolutionX \"wide\" ."), "resolution-positive"));
	CHECK(check("ex:d app:resolutionX 1920 ; app:resolutionY 1080 .").empty());
}

TEST_CASE("validate: param-range") {
	for (const char* prop : {"framesPerSecond", "minBitrate", "maxFrames", "maxFrameBytes",
			 "intervalSeconds"}) {
		CHECK(fires(check("ex:c app:" + std::string(prop) + " -1 ."), "param-range"));
		CHECK(check("ex:c app:" + std::string(prop) + " 0 .").empty());
	}
	// maxLatency must be strictly positive.
	CHECK(fires(check("ex:c app:maxLatency 0 ."), "param-range"));
	CHECK(fires(check("ex:c app:maxLatency -0.5 ."), "param-range"));
	CHECK(check("ex:c app:maxLatency 0.25 .").empty());
	CHECK(fires(check("ex:c app:minBitrate \"fast\" ."), "param-range"));
}

TEST_CASE("validate: application-shape") {
	// Missing all three application properties: three violations.
	std::vector<Violation> v = check("ex:a a sdn:Application .");
	CHECK(v.size() == 3);
	CHECK(fires(v, "application-shape"));
	// Duplicated property is flagged too.
	CHECK(fires(check("ex:a a sdn:Application ;\n"
					  "  sdn:appTenant ex:t1 , ex:t2 ;\n"
					  "  sdn:appInterface ex:i ; sdn:appValidity ex:v ."),
		"application-shape"));
	CHECK(check("ex:a a sdn:Application ;\n"
				"  sdn:appTenant ex:t ; sdn:appInterface ex:i ; sdn:appValidity ex:v .")
			  .empty());
}

TEST_CASE("validate: filter-shape") {
	std::vector<Violation> v = check("ex:f a sdn:FlowFilter .");
	CHECK(v.size() == 2);  // no condition, wrong requirement count
	CHECK(fires(v, "filter-shape"));
	CHECK(fires(check("ex:f a sdn:FlowFilter ; sdn:condition ex:c ;\n"
					  "  sdn:requirement ex:r1 , ex:r2 ."),
		"filter-shape"));
	CHECK(check("ex:f a sdn:FlowFilter ; sdn:condition ex:c ; sdn:requirement ex:r .")
			  .empty());
	// Multiple conditions are fine.
	CHECK(check("ex:f a sdn:FlowFilter ; sdn:condition ex:c1 , ex:c2 ;\n"
				"  sdn:requirement ex:r .")
			  .empty());
}

TEST_CASE("validate: requirement-range") {
	CHECK(fires(check("ex:r sdn:minBandwidth -5 ."), "requirement-range"));
	CHECK(check("ex:r sdn:minBandwidth 0 .").empty());
	CHECK(fires(check("ex:r sdn:maxDelay 0 ."), "requirement-range"));
	CHECK(check("ex:r sdn:maxDelay 0.2 .").empty());
	CHECK(fires(check("ex:r sdn:protectDegree 1 ."), "requirement-range"));
	CHECK(fires(check("ex:r sdn:protectDegree 2.5 ."), "requirement-range"));
	CHECK(check("ex:r sdn:protectDegree 2 .").empty());
	CHECK(fires(check("ex:r sdn:minBandwidth \"lots\" ."), "requirement-range"));
}

TEST_CASE("validate: device-address warning") {
	std::vector<Violation> v = check(
		"ex:d a rcp:Device ; rcp:deviceAddress \"10.0.0.1\" , \"10.0.0.2\" .");
	REQUIRE(v.size() == 1);
	CHECK(v[0].rule == "device-address");
	CHECK(v[0].warning);
	CHECK(v[0].message.find("2 addresses") != std::string::npos);
	CHECK(check("ex:d a rcp:Device ; rcp:deviceAddress \"10.0.0.1\" .").empty());
	// Non-device subjects with several addresses are not the validator's
	// business.
	CHECK(check("ex:d rcp:deviceAddress \"10.0.0.1\" , \"10.0.0.2\" .").empty());
}

TEST_CASE("deviceProfile picks the lowest value per property") {
	Store st = storeOf(
		"ex:d a rcp:Device ; rcp:deviceAddress \"10.0.0.9\" , \"10.0.0.2\" ;\n"
		"  app:videoEfficiency 0.95 .");
	std::map<Term, Term> profile = deviceProfile(st, Term::iri("http://e.test/d"));
	CHECK(profile.size() == 3);  // type, address, efficiency
	CHECK(profile.at(vocab::rcp("deviceAddress")) == Term::str("10.0.0.2"));
	CHECK(profile.at(vocab::app("videoEfficiency"))
		== Term::literal("0.95", std::string(xsd::kDecimal)));
	CHECK_THROWS_AS(deviceProfile(st, Term::iri("http://e.test/ghost")), UnknownDevice);
	try {
		deviceProfile(st, Term::iri("http://e.test/ghost"));
	} catch (const UnknownDevice& e) {
		CHECK(e.device == Term::iri("http://e.test/ghost"));
	}
}

TEST_CASE("all fixtures validate cleanly") {
	for (const char* name : {"camera.n3", "audio.n3", "qcc.n3", "timeliness.n3",
			 "intrusion.n3", "qcc-nointerval.n3"}) {
		Store st;
		st.loadDocument(parseFile(test::fixture(name)), "f");
		std::vector<Violation> vs = validate(st);
		for (const Violation& v : vs) {
			CAPTURE(name);
			CAPTURE(v.rule);
			CAPTURE(v.message);
			CHECK(v.warning);  // only warnings, never hard violations
		}
	}
}
