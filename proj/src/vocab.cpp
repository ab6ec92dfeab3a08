#include "qosflow/vocab.hpp"

#include <cmath>

#include "qosflow/numeric.hpp"

namespace qosflow {

namespace vocab {

Term rcp(std::string_view local) { return Term::iri(std::string(ns::kRcp) + std::string(local)); }
Term app(std::string_view local) { return Term::iri(std::string(ns::kApp) + std::string(local)); }
Term sdn(std::string_view local) { return Term::iri(std::string(ns::kSdn) + std::string(local)); }
Term clc(std::string_view local) { return Term::iri(std::string(ns::kClc) + std::string(local)); }

const Term& rdfType() {
	static const Term t = Term::iri(std::string(ns::kRdf) + "type");
	return t;
}

std::map<std::string, std::string> standardPrefixes() {
	return {
		{"rcp", std::string(ns::kRcp)},
		{"app", std::string(ns::kApp)},
		{"sdn", std::string(ns::kSdn)},
		{"clc", std::string(ns::kClc)},
		{"math", std::string(ns::kMath)},
		{"list", std::string(ns::kList)},
		{"rdf", std::string(ns::kRdf)},
		{"xsd", std::string(ns::kXsd)},
	};
}

}  // namespace vocab

UnknownDevice::UnknownDevice(const Term& d)
	: std::runtime_error("unknown device " + d.debugString()), device(d) {}

namespace {

bool hasType(const Store& store, const Term& subject, const Term& type) {
	return store.contains(Triple{subject, vocab::rdfType(), type});
}

std::vector<Term> objectsOf(const Store& store, const Term& subject, const Term& predicate) {
	std::vector<Term> out;
	for (const Triple& t : store.match(Pattern{subject, predicate, std::nullopt}))
		out.push_back(t.object);
	return out;
}

// Numeric object check helper; pushes a violation and returns nullopt when
// the literal does not parse.
std::optional<NumericValue> numericOrFlag(const Triple& t, const std::string& rule,
	std::vector<Violation>& out) {
	try {
		return parseNumeric(t.object);
	} catch (const NonNumericLiteral&) {
		out.push_back({t.subject, rule,
			t.predicate.debugString() + " value " + t.object.debugString() + " is not numeric",
			false});
		return std::nullopt;
	}
}

}  // namespace

std::vector<Violation> validate(const Store& store) {
	std::vector<Violation> out;
	const Term rdfType = vocab::rdfType();

	// Endpoints that are asserted must name ingredients or offerings.
	for (const char* prop : {"interactionFrom", "interactionTo"}) {
		for (const Triple& t : store.match(Pattern{std::nullopt, vocab::rcp(prop), std::nullopt})) {
			const Term& endpoint = t.object;
			if (endpoint.isLiteral() || endpoint.isList()) {
				out.push_back({t.subject, "endpoint-type",
					"endpoint " + endpoint.debugString() + " is not a node", false});
				continue;
			}
			if (!hasType(store, endpoint, vocab::rcp("Ingredient")) &&
				!hasType(store, endpoint, vocab::rcp("Offering"))) {
				out.push_back({t.subject, "endpoint-type",
					"endpoint " + endpoint.debugString() +
						" is neither an rcp:Ingredient nor an rcp:Offering",
					false});
			}
		}
	}

	// Device-side media properties.
	for (const Triple& t :
		store.match(Pattern{std::nullopt, vocab::app("videoEfficiency"), std::nullopt})) {
		if (auto v = numericOrFlag(t, "efficiency-range", out)) {
			double d = v->toDouble();
			if (std::isnan(d) || d < 0.0 || d > 1.0)
				out.push_back({t.subject, "efficiency-range",
					"app:videoEfficiency " + t.object.value() + " outside [0,1]", false});
		}
	}
	for (const char* prop : {"resolutionX", "resolutionY"}) {
		for (const Triple& t : store.match(Pattern{std::nullopt, vocab::app(prop), std::nullopt})) {
			if (auto v = numericOrFlag(t, "resolution-positive", out)) {
				if (!v->isInteger() || v->asInteger() <= 0)
					out.push_back({t.subject, "resolution-positive",
						"app:" + std::string(prop) + " must be a positive integer, got " +
							t.object.debugString(),
						false});
			}
		}
	}

	// Constraint parameters must be numeric and non-negative; latency must
	// be strictly positive.
	for (const char* prop : {"framesPerSecond", "minBitrate", "maxFrames", "maxFrameBytes",
			 "intervalSeconds", "maxLatency"}) {
		bool strict = std::string_view(prop) == "maxLatency";
		for (const Triple& t : store.match(Pattern{std::nullopt, vocab::app(prop), std::nullopt})) {
			if (auto v = numericOrFlag(t, "param-range", out)) {
				double d = v->toDouble();
				if (d < 0.0 || (strict && d <= 0.0))
					out.push_back({t.subject, "param-range",
						"app:" + std::string(prop) + " must be " +
							(strict ? "positive" : "non-negative") + ", got " + t.object.value(),
						false});
			}
		}
	}

	// SDN structure.
	for (const Triple& t : store.match(Pattern{std::nullopt, rdfType, vocab::sdn("Application")})) {
		for (const char* prop : {"appTenant", "appInterface", "appValidity"}) {
			std::size_t n = objectsOf(store, t.subject, vocab::sdn(prop)).size();
			if (n != 1)
				out.push_back({t.subject, "application-shape",
					"sdn:Application needs exactly one sdn:" + std::string(prop) + ", found " +
						std::to_string(n),
					false});
		}
	}
	for (const Triple& t : store.match(Pattern{std::nullopt, rdfType, vocab::sdn("FlowFilter")})) {
		if (objectsOf(store, t.subject, vocab::sdn("condition")).empty())
			out.push_back({t.subject, "filter-shape", "sdn:FlowFilter has no sdn:condition", false});
		std::size_t reqs = objectsOf(store, t.subject, vocab::sdn("requirement")).size();
		if (reqs != 1)
			out.push_back({t.subject, "filter-shape",
				"sdn:FlowFilter needs exactly one sdn:requirement, found " + std::to_string(reqs),
				false});
	}
	for (const Triple& t :
		store.match(Pattern{std::nullopt, vocab::sdn("minBandwidth"), std::nullopt})) {
		if (auto v = numericOrFlag(t, "requirement-range", out)) {
			if (v->toDouble() < 0.0)
				out.push_back({t.subject, "requirement-range",
					"sdn:minBandwidth must be non-negative", false});
		}
	}
	for (const Triple& t : store.match(Pattern{std::nullopt, vocab::sdn("maxDelay"), std::nullopt})) {
		if (auto v = numericOrFlag(t, "requirement-range", out)) {
			if (v->toDouble() <= 0.0)
				out.push_back({t.subject, "requirement-range", "sdn:maxDelay must be positive",
					false});
		}
	}
	for (const Triple& t :
		store.match(Pattern{std::nullopt, vocab::sdn("protectDegree"), std::nullopt})) {
		if (auto v = numericOrFlag(t, "requirement-range", out)) {
			if (!v->isInteger() || v->asInteger() < 2)
				out.push_back({t.subject, "requirement-range",
					"sdn:protectDegree must be an integer >= 2", false});
		}
	}

	// Multi-valued addresses are legal but usually a modelling slip: every
	// address combination fans out into its own flow filter.
	for (const Triple& t : store.match(Pattern{std::nullopt, rdfType, vocab::rcp("Device")})) {
		std::size_t n = objectsOf(store, t.subject, vocab::rcp("deviceAddress")).size();
		if (n > 1)
			out.push_back({t.subject, "device-address",
				"device has " + std::to_string(n) + " addresses; one filter per combination",
				true});
	}

	return out;
}

std::map<Term, Term> deviceProfile(const Store& store, const Term& device) {
	std::vector<Triple> triples = store.match(Pattern{device, std::nullopt, std::nullopt});
	if (triples.empty()) throw UnknownDevice(device);
	std::map<Term, Term> profile;
	for (const Triple& t : triples) {
		auto [it, inserted] = profile.emplace(t.predicate, t.object);
		if (!inserted && termCompare(t.object, it->second) < 0) it->second = t.object;
	}
	return profile;
}

}  // namespace qosflow
