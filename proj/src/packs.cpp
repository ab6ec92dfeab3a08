#include <map>

#include "qosflow/n3_parser.hpp"
#include "qosflow/packs_data.hpp"
#include "qosflow/translator.hpp"
#include "qosflow/vocab.hpp"

namespace qosflow {

UnknownPack::UnknownPack(const std::string& n)
	: std::runtime_error("unknown rule pack '" + n + "'"), name(n) {}

const std::vector<std::string>& availablePacks() {
	static const std::vector<std::string> names = [] {
		std::vector<std::string> out;
		for (const auto& [name, text] : detail::kEmbeddedPacks) {
			if (name != "vocab") out.emplace_back(name);
		}
		return out;
	}();
	return names;
}

const Document& rulePack(const std::string& name) {
	static const std::map<std::string, Document> parsed = [] {
		std::map<std::string, Document> out;
		for (const auto& [packName, text] : detail::kEmbeddedPacks)
			out.emplace(std::string(packName), parseDocument(text));
		return out;
	}();
	auto it = parsed.find(name);
	if (it == parsed.end() || name == "vocab") throw UnknownPack(name);
	return it->second;
}

namespace vocab {

const Document& baseVocabulary() {
	static const Document doc = [] {
		for (const auto& [name, text] : detail::kEmbeddedPacks) {
			if (name == "vocab") return parseDocument(text);
		}
		return Document{};
	}();
	return doc;
}

}  // namespace vocab

}  // namespace qosflow
