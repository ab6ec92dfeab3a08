#include "qosflow/n3_writer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qosflow/graph_iso.hpp"
#include "qosflow/n3_parser.hpp"
#include "qosflow/numeric.hpp"

namespace qosflow {
namespace {

constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

bool validLocal(std::string_view local) {
	if (local.empty()) return true;
	auto head = [](char c) {
		return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
	};
	auto body = [&head](char c) { return head(c) || c == '-' || c == '.'; };
	if (!head(local.front())) return false;
	if (local.back() == '.') return false;
	for (char c : local) {
		if (!body(c)) return false;
	}
	return true;
}

bool validBlankLabel(std::string_view label) {
	if (label.empty()) return false;
	for (char c : label) {
		if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
	}
	return true;
}

class Writer {
public:
	Writer(const Document& doc, const SerializeOptions& opts) : doc_(doc), opts_(opts) {}

	std::string run() {
		std::ostringstream out;
		for (const auto& [name, iri] : doc_.prefixes)
			out << "@prefix " << name << ": <" << iri << "> .\n";
		if (!doc_.prefixes.empty() && (!doc_.triples.empty() || !doc_.rules.empty())) out << "\n";

		std::vector<Triple> triples = opts_.canonicalizeBlankLabels
			? canonicalizeBlanks(doc_.triples)
			: sortedUnique(doc_.triples);
		for (const Triple& t : triples) {
			writeTriple(out, t);
			out << " .\n";
		}

		std::vector<Rule> rules;
		rules.reserve(doc_.rules.size());
		for (const Rule& r : doc_.rules)
			rules.push_back(opts_.canonicalizeBlankLabels ? normalizeRuleBlanks(r) : r);
		std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
			return ruleCompare(a, b) < 0;
		});
		rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
		for (const Rule& r : rules) {
			writeGraph(out, r.premise);
			out << " => ";
			writeGraph(out, r.conclusion);
			out << " .\n";
		}
		return out.str();
	}

private:
	static std::vector<Triple> sortedUnique(std::vector<Triple> v) {
		std::sort(v.begin(), v.end());
		v.erase(std::unique(v.begin(), v.end()), v.end());
		return v;
	}

	void writeGraph(std::ostringstream& out, const Graph& g) {
		out << "{";
		bool first = true;
		for (const Triple& t : g) {
			out << (first ? " " : " . ");
			writeTriple(out, t);
			first = false;
		}
		out << " }";
	}

	void writeTriple(std::ostringstream& out, const Triple& t) {
		writeTerm(out, t.subject);
		out << ' ';
		if (t.predicate.isIri() && t.predicate.value() == kRdfType) {
			out << 'a';
		} else {
			writeTerm(out, t.predicate);
		}
		out << ' ';
		writeTerm(out, t.object);
	}

	void writeTerm(std::ostringstream& out, const Term& t) {
		switch (t.kind()) {
			case TermKind::Iri: {
				writeIri(out, t.value());
				return;
			}
			case TermKind::Blank: {
				if (!validBlankLabel(t.value()))
					throw std::invalid_argument("blank label not serializable: " + t.value());
				out << "_:" << t.value();
				return;
			}
			case TermKind::Variable: {
				out << '?' << t.value();
				return;
			}
			case TermKind::List: {
				out << '(';
				for (const Term& e : t.elements()) {
					out << ' ';
					writeTerm(out, e);
				}
				out << (t.elements().empty() ? ")" : " )");
				return;
			}
			case TermKind::Literal: {
				writeLiteral(out, t);
				return;
			}
		}
	}

	void writeIri(std::ostringstream& out, const std::string& iri) {
		// Longest declared namespace that prefixes the IRI and leaves a
		// lexer-safe local part wins.
		const std::string* bestName = nullptr;
		std::size_t bestLen = 0;
		for (const auto& [name, ns] : doc_.prefixes) {
			if (ns.size() < bestLen || ns.empty()) continue;
			if (iri.compare(0, ns.size(), ns) != 0) continue;
			if (!validLocal(std::string_view(iri).substr(ns.size()))) continue;
			if (ns.size() > bestLen) {
				bestLen = ns.size();
				bestName = &name;
			}
		}
		if (bestName) {
			out << *bestName << ':' << iri.substr(bestLen);
		} else {
			out << '<' << iri << '>';
		}
	}

	// Canonical lexicals of numeric and boolean literals use the bare token
	// shorthand; everything else gets the quoted form.
	void writeLiteral(std::ostringstream& out, const Term& t) {
		const std::string& dt = t.datatype();
		if (dt == xsd::kInteger || dt == xsd::kDecimal || dt == xsd::kDouble) {
			try {
				Term canon = formatNumeric(parseNumeric(t));
				if (canon == t) {
					out << t.value();
					return;
				}
			} catch (const NonNumericLiteral&) {
				// fall through to the quoted form
			}
		}
		if (dt == xsd::kBoolean && (t.value() == "true" || t.value() == "false")) {
			out << t.value();
			return;
		}
		out << '"';
		for (char c : t.value()) {
			switch (c) {
				case '"': out << "\\\""; break;
				case '\\': out << "\\\\"; break;
				case '\n': out << "\\n"; break;
				case '\t': out << "\\t"; break;
				case '\r': out << "\\r"; break;
				default: out << c;
			}
		}
		out << '"';
		if (dt != xsd::kString) {
			out << "^^";
			writeIri(out, dt);
		}
	}

	const Document& doc_;
	const SerializeOptions& opts_;
};

}  // namespace

std::string serializeDocument(const Document& doc, const SerializeOptions& opts) {
	return Writer(doc, opts).run();
}

void writeDocumentFile(const std::filesystem::path& path, const Document& doc,
	const SerializeOptions& opts) {
	std::string text = serializeDocument(doc, opts);
	std::filesystem::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) throw IoError("cannot write " + tmp.string());
		out << text;
		if (!out.good()) throw IoError("write failed for " + tmp.string());
	}
	std::error_code ec;
	std::filesystem::rename(tmp, path, ec);
	if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

}  // namespace qosflow
