#ifndef QOSFLOW_N3_WRITER_HPP
#define QOSFLOW_N3_WRITER_HPP

#include <filesystem>
#include <string>

#include "qosflow/document.hpp"

namespace qosflow {

struct SerializeOptions {
	// Relabel blank nodes canonically ("b0", "b1", ...). Disable to persist
	// stores whose blank labels are load-bearing (skolem identities); labels
	// must then already be lexer-valid.
	bool canonicalizeBlankLabels = true;
};

// Canonical serialization: sorted prefix block, one statement per line,
// triples then rules, each section sorted; longest-prefix name compression;
// canonical literal shorthand. Equal documents (same content) serialize to
// identical bytes.
std::string serializeDocument(const Document& doc, const SerializeOptions& opts = {});

// Serializes to a file via write-then-rename; throws IoError on failure.
void writeDocumentFile(const std::filesystem::path& path, const Document& doc,
	const SerializeOptions& opts = {});

}  // namespace qosflow

#endif  // QOSFLOW_N3_WRITER_HPP
