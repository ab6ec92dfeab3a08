#ifndef QOSFLOW_BUILTINS_HPP
#define QOSFLOW_BUILTINS_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qosflow/term.hpp"

namespace qosflow {

struct BuiltinTypeError : std::runtime_error {
	BuiltinTypeError(std::string predicate, const Term& subject, const std::string& message);
	std::string predicate;
	Term subject;
};

// A builtin maps a ground subject term to candidate object terms; the engine
// unifies each candidate with the rule's object pattern. Zero candidates
// means "no solution", which is distinct from a type error.
using BuiltinFn = std::vector<Term> (*)(const Term& subject);

class BuiltinRegistry {
public:
	// math:product/sum/difference/quotient and
	// list:member/append/length/first/rest.
	static const BuiltinRegistry& standard();

	void add(std::string predicateIri, BuiltinFn fn);
	bool contains(const std::string& predicateIri) const;
	BuiltinFn find(const std::string& predicateIri) const;  // nullptr when absent

private:
	std::map<std::string, BuiltinFn> fns_;
};

}  // namespace qosflow

#endif  // QOSFLOW_BUILTINS_HPP
