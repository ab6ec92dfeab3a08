#ifndef QOSFLOW_N3_PARSER_HPP
#define QOSFLOW_N3_PARSER_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qosflow/document.hpp"

namespace qosflow {

// Positioned syntax error. Every malformed input maps to one of these; the
// parser never throws anything else and never crashes on arbitrary bytes.
struct ParseError : std::runtime_error {
	ParseError(int line, int column, const std::string& message);
	int line;
	int column;
	std::string message;
};

struct UnknownPrefix : ParseError {
	UnknownPrefix(int line, int column, std::string prefix);
	std::string prefix;
};

struct IoError : std::runtime_error {
	explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

// Parses the N3 subset described in docs/n3-subset.md: @prefix, `a`,
// semicolon/comma lists, collections, anonymous blank nodes, typed and
// numeric literals, ?variables inside rule graphs and top-level
// `{ ... } => { ... } .` rules. Numeric literals are canonicalized while
// parsing. Throws ParseError / UnknownPrefix.
Document parseDocument(std::string_view text);

// Reads and parses a file; throws IoError when unreadable.
Document parseFile(const std::filesystem::path& path);

}  // namespace qosflow

#endif  // QOSFLOW_N3_PARSER_HPP
