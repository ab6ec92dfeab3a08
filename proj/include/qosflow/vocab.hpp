#ifndef QOSFLOW_VOCAB_HPP
#define QOSFLOW_VOCAB_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qosflow/document.hpp"
#include "qosflow/store.hpp"
#include "qosflow/term.hpp"

namespace qosflow {

namespace ns {
inline constexpr std::string_view kRcp = "http://qosflow.dev/vocab/recipe#";
inline constexpr std::string_view kApp = "http://qosflow.dev/vocab/appqos#";
inline constexpr std::string_view kSdn = "http://qosflow.dev/vocab/sdn#";
inline constexpr std::string_view kClc = "http://qosflow.dev/vocab/calc#";
inline constexpr std::string_view kMath = "http://www.w3.org/2000/10/swap/math#";
inline constexpr std::string_view kList = "http://www.w3.org/2000/10/swap/list#";
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
}  // namespace ns

namespace vocab {

Term rcp(std::string_view local);
Term app(std::string_view local);
Term sdn(std::string_view local);
Term clc(std::string_view local);
const Term& rdfType();

// Prefix table covering all vocabulary namespaces, for serialization.
std::map<std::string, std::string> standardPrefixes();

// Parsed embedded vocabulary document (packs/vocab.n3).
const Document& baseVocabulary();

inline constexpr std::string_view kValidFrom = "1970-01-01T00:00:00Z";
inline constexpr std::string_view kValidTo = "9999-12-31T23:59:59Z";

}  // namespace vocab

struct Violation {
	Term subject;
	std::string rule;  // stable check identifier, e.g. "endpoint-type"
	std::string message;
	bool warning = false;
};

// Structural checks over recipe/device/SDN data. Abstract recipes (endpoints
// not yet asserted on constraints) are fine; violations are modelling errors
// that translation or emission would trip over, warnings are tolerated
// oddities (e.g. multi-valued device addresses, which fan out into one flow
// filter per address combination).
std::vector<Violation> validate(const Store& store);

struct UnknownDevice : std::runtime_error {
	explicit UnknownDevice(const Term& device);
	Term device;
};

// Single-valued property view of a device node: for multi-valued properties
// the termCompare-lowest object wins. Throws UnknownDevice for a subject
// with no triples.
std::map<Term, Term> deviceProfile(const Store& store, const Term& device);

}  // namespace qosflow

#endif  // QOSFLOW_VOCAB_HPP
