#include "qosflow/n3_parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "qosflow/numeric.hpp"

namespace qosflow {

ParseError::ParseError(int l, int c, const std::string& msg)
	: std::runtime_error("line " + std::to_string(l) + " col " + std::to_string(c) + ": " + msg),
	  line(l),
	  column(c),
	  message(msg) {}

UnknownPrefix::UnknownPrefix(int l, int c, std::string p)
	: ParseError(l, c, "unknown prefix '" + p + ":'"), prefix(std::move(p)) {}

namespace {

enum class Tok {
	Eof,
	Dot,
	Semicolon,
	Comma,
	LParen,
	RParen,
	LBracket,
	RBracket,
	LBrace,
	RBrace,
	Implies,
	PrefixKw,
	KwA,
	BoolTrue,
	BoolFalse,
	Iri,
	Pname,
	Blank,
	Var,
	String,
	Integer,
	Decimal,
	Double,
	CaretCaret,
};

struct Token {
	Tok type = Tok::Eof;
	std::string text;
	int line = 1;
	int col = 1;
};

const char* tokName(Tok t) {
	switch (t) {
		case Tok::Eof: return "end of input";
		case Tok::Dot: return "'.'";
		case Tok::Semicolon: return "';'";
		case Tok::Comma: return "','";
		case Tok::LParen: return "'('";
		case Tok::RParen: return "')'";
		case Tok::LBracket: return "'['";
		case Tok::RBracket: return "']'";
		case Tok::LBrace: return "'{'";
		case Tok::RBrace: return "'}'";
		case Tok::Implies: return "'=>'";
		case Tok::PrefixKw: return "'@prefix'";
		case Tok::KwA: return "'a'";
		case Tok::BoolTrue: return "'true'";
		case Tok::BoolFalse: return "'false'";
		case Tok::Iri: return "IRI";
		case Tok::Pname: return "prefixed name";
		case Tok::Blank: return "blank node label";
		case Tok::Var: return "variable";
		case Tok::String: return "string literal";
		case Tok::Integer: return "integer";
		case Tok::Decimal: return "decimal";
		case Tok::Double: return "double";
		case Tok::CaretCaret: return "'^^'";
	}
	return "token";
}

bool isPnStartChar(char c) {
	return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool isPnChar(char c) {
	return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Lexer {
public:
	explicit Lexer(std::string_view text) : text_(text) {}

	Token next() {
		skipTrivia();
		Token tok;
		tok.line = line_;
		tok.col = col_;
		if (atEnd()) return tok;
		char c = peek();
		switch (c) {
			case '.': get(); tok.type = Tok::Dot; return tok;
			case ';': get(); tok.type = Tok::Semicolon; return tok;
			case ',': get(); tok.type = Tok::Comma; return tok;
			case '(': get(); tok.type = Tok::LParen; return tok;
			case ')': get(); tok.type = Tok::RParen; return tok;
			case '[': get(); tok.type = Tok::LBracket; return tok;
			case ']': get(); tok.type = Tok::RBracket; return tok;
			case '{': get(); tok.type = Tok::LBrace; return tok;
			case '}': get(); tok.type = Tok::RBrace; return tok;
			case '=':
				get();
				if (!atEnd() && peek() == '>') {
					get();
					tok.type = Tok::Implies;
					return tok;
				}
				fail(tok, "expected '=>'");
			case '^':
				get();
				if (!atEnd() && peek() == '^') {
					get();
					tok.type = Tok::CaretCaret;
					return tok;
				}
				fail(tok, "expected '^^'");
			case '<': return lexIri(tok);
			case '"': return lexString(tok);
			case '?': return lexVar(tok);
			case '_': return lexBlank(tok);
			case '@': return lexAt(tok);
			default: break;
		}
		if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) return lexNumber(tok);
		return lexName(tok);
	}

private:
	bool atEnd() const { return pos_ >= text_.size(); }
	char peek(std::size_t ahead = 0) const {
		return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
	}
	char get() {
		char c = text_[pos_++];
		if (c == '\n') {
			++line_;
			col_ = 1;
		} else {
			++col_;
		}
		return c;
	}

	[[noreturn]] void fail(const Token& tok, const std::string& msg) {
		throw ParseError(tok.line, tok.col, msg);
	}

	void skipTrivia() {
		while (!atEnd()) {
			char c = peek();
			if (c == '#') {
				while (!atEnd() && peek() != '\n') get();
			} else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
				get();
			} else {
				break;
			}
		}
	}

	Token lexIri(Token tok) {
		get();  // '<'
		std::string out;
		while (true) {
			if (atEnd()) fail(tok, "unterminated IRI");
			char c = get();
			if (c == '>') break;
			if (c == '\n' || c == ' ' || c == '<' || c == '"') fail(tok, "invalid character in IRI");
			out += c;
		}
		tok.type = Tok::Iri;
		tok.text = std::move(out);
		return tok;
	}

	Token lexString(Token tok) {
		get();  // opening quote
		std::string out;
		while (true) {
			if (atEnd()) fail(tok, "unterminated string literal");
			char c = get();
			if (c == '"') break;
			if (c == '\n') fail(tok, "newline in string literal");
			if (c == '\\') {
				if (atEnd()) fail(tok, "unterminated escape sequence");
				char e = get();
				switch (e) {
					case '"': out += '"'; break;
					case '\\': out += '\\'; break;
					case 'n': out += '\n'; break;
					case 't': out += '\t'; break;
					case 'r': out += '\r'; break;
					default: fail(tok, std::string("unsupported escape '\\") + e + "'");
				}
			} else {
				out += c;
			}
		}
		tok.type = Tok::String;
		tok.text = std::move(out);
		return tok;
	}

	Token lexVar(Token tok) {
		get();  // '?'
		if (atEnd() || !isPnStartChar(peek())) fail(tok, "expected variable name after '?'");
		std::string out;
		while (!atEnd() && isPnChar(peek())) out += get();
		tok.type = Tok::Var;
		tok.text = std::move(out);
		return tok;
	}

	Token lexBlank(Token tok) {
		get();  // '_'
		if (atEnd() || peek() != ':') fail(tok, "expected ':' after '_'");
		get();
		if (atEnd() || !(std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
			fail(tok, "expected blank node label after '_:'");
		std::string out;
		while (!atEnd() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) out += get();
		// 'anonN' is reserved for [ ... ] nodes minted by the parser.
		if (out.size() > 4 && out.compare(0, 4, "anon") == 0 &&
			out.find_first_not_of("0123456789", 4) == std::string::npos)
			fail(tok, "blank node label '" + out + "' is reserved");
		tok.type = Tok::Blank;
		tok.text = std::move(out);
		return tok;
	}

	Token lexAt(Token tok) {
		get();  // '@'
		std::string word;
		while (!atEnd() && std::isalpha(static_cast<unsigned char>(peek()))) word += get();
		if (word == "prefix") {
			tok.type = Tok::PrefixKw;
			return tok;
		}
		fail(tok, "unsupported directive '@" + word + "'");
	}

	// INTEGER / DECIMAL / DOUBLE per Turtle: a '.' starts a fraction only
	// when followed by a digit, so statement dots stay unambiguous.
	Token lexNumber(Token tok) {
		std::string out;
		if (peek() == '+' || peek() == '-') out += get();
		bool digits = false;
		while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) {
			out += get();
			digits = true;
		}
		bool fraction = false;
		if (!atEnd() && peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
			out += get();
			fraction = true;
			while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) out += get();
		}
		if (!digits && !fraction) fail(tok, "malformed numeric literal");
		bool exponent = false;
		if (!atEnd() && (peek() == 'e' || peek() == 'E')) {
			std::size_t ahead = 1;
			if (peek(1) == '+' || peek(1) == '-') ahead = 2;
			if (std::isdigit(static_cast<unsigned char>(peek(ahead)))) {
				exponent = true;
				out += get();
				if (peek() == '+' || peek() == '-') out += get();
				while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) out += get();
			}
		}
		tok.type = exponent ? Tok::Double : (fraction ? Tok::Decimal : Tok::Integer);
		tok.text = std::move(out);
		return tok;
	}

	// Bare words: 'a', 'true', 'false', or a prefixed name (colon required).
	Token lexName(Token tok) {
		std::string prefix;
		while (!atEnd() && isPnChar(peek())) prefix += get();
		if (atEnd() || peek() != ':') {
			if (prefix == "a") {
				tok.type = Tok::KwA;
				return tok;
			}
			if (prefix == "true") {
				tok.type = Tok::BoolTrue;
				return tok;
			}
			if (prefix == "false") {
				tok.type = Tok::BoolFalse;
				return tok;
			}
			if (prefix.empty()) fail(tok, std::string("unexpected character '") + peek() + "'");
			fail(tok, "unexpected word '" + prefix + "' (prefixed names need a colon)");
		}
		if (!prefix.empty() && !isPnStartChar(prefix[0]))
			fail(tok, "prefix may not start with '" + prefix.substr(0, 1) + "'");
		get();  // ':'
		std::string local;
		while (!atEnd() && (isPnChar(peek()) || peek() == '.')) local += get();
		// Trailing dots belong to the statement, not the local name.
		while (!local.empty() && local.back() == '.') {
			local.pop_back();
			unget();
		}
		tok.type = Tok::Pname;
		tok.text = prefix + ":" + local;
		return tok;
	}

	// Only ever called for '.' just consumed by lexName; '.' never crosses a
	// line boundary, so column arithmetic is safe.
	void unget() {
		--pos_;
		--col_;
	}

	std::string_view text_;
	std::size_t pos_ = 0;
	int line_ = 1;
	int col_ = 1;
};

class Parser {
public:
	explicit Parser(std::string_view text) : lexer_(text) { advance(); }

	Document run() {
		while (cur_.type != Tok::Eof) parseStatement();
		return std::move(doc_);
	}

private:
	void advance() { cur_ = lexer_.next(); }

	[[noreturn]] void fail(const std::string& msg) { throw ParseError(cur_.line, cur_.col, msg); }

	void expect(Tok t) {
		if (cur_.type != t)
			fail(std::string("expected ") + tokName(t) + ", found " + tokName(cur_.type));
		advance();
	}

	void parseStatement() {
		if (cur_.type == Tok::PrefixKw) {
			parsePrefixDecl();
			return;
		}
		if (cur_.type == Tok::LBrace) {
			parseRule();
			return;
		}
		parseTriples(doc_.triples, /*inGraph=*/false);
		expect(Tok::Dot);
	}

	void parsePrefixDecl() {
		advance();
		if (cur_.type != Tok::Pname) fail("expected prefix name after @prefix");
		std::string pname = cur_.text;
		auto colon = pname.find(':');
		if (colon == std::string::npos || colon + 1 != pname.size())
			fail("prefix declaration takes a bare 'name:'");
		std::string name = pname.substr(0, colon);
		advance();
		if (cur_.type != Tok::Iri) fail("expected IRI in prefix declaration");
		doc_.prefixes[name] = cur_.text;
		advance();
		expect(Tok::Dot);
	}

	void parseRule() {
		Token open = cur_;
		Graph premise = parseGraph();
		if (cur_.type != Tok::Implies)
			fail(std::string("expected '=>' after rule premise, found ") + tokName(cur_.type));
		advance();
		if (cur_.type != Tok::LBrace) fail("expected '{' to open rule conclusion");
		Graph conclusion = parseGraph();
		expect(Tok::Dot);
		checkRangeRestriction(premise, conclusion, open);
		doc_.rules.push_back(Rule{std::move(premise), std::move(conclusion)});
	}

	Graph parseGraph() {
		expect(Tok::LBrace);
		std::vector<Triple> triples;
		while (cur_.type != Tok::RBrace) {
			if (cur_.type == Tok::Eof) fail("unterminated graph (missing '}')");
			parseTriples(triples, /*inGraph=*/true);
			if (cur_.type == Tok::Dot) {
				advance();
			} else if (cur_.type != Tok::RBrace) {
				fail(std::string("expected '.' or '}', found ") + tokName(cur_.type));
			}
		}
		advance();
		return Graph(std::move(triples));
	}

	void parseTriples(std::vector<Triple>& out, bool inGraph) {
		bool subjectWasBracket = cur_.type == Tok::LBracket;
		Term subject = parseTerm(out, inGraph, /*asPredicate=*/false);
		if (subject.isLiteral()) fail("literal is not allowed as subject");
		// `[ :p :o ] .` is a complete statement on its own.
		if (subjectWasBracket && (cur_.type == Tok::Dot || cur_.type == Tok::RBrace)) return;
		parsePredicateObjectList(subject, out, inGraph);
	}

	void parsePredicateObjectList(const Term& subject, std::vector<Triple>& out, bool inGraph) {
		while (true) {
			Token at = cur_;
			Term predicate = parseTerm(out, inGraph, /*asPredicate=*/true);
			if (!predicate.isIri() && !predicate.isVariable())
				throw ParseError(at.line, at.col, "predicate must be an IRI or a variable");
			while (true) {
				Term object = parseTerm(out, inGraph, /*asPredicate=*/false);
				out.push_back(Triple{subject, predicate, object});
				if (cur_.type != Tok::Comma) break;
				advance();
			}
			if (cur_.type != Tok::Semicolon) break;
			advance();
			// Tolerate a dangling ';' before '.' or ']'.
			if (cur_.type == Tok::Dot || cur_.type == Tok::RBracket || cur_.type == Tok::RBrace) break;
		}
	}

	Term parseTerm(std::vector<Triple>& out, bool inGraph, bool asPredicate) {
		switch (cur_.type) {
			case Tok::KwA: {
				if (!asPredicate) fail("'a' is only valid as a predicate");
				advance();
				return Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
			}
			case Tok::Iri: {
				std::string iri = cur_.text;
				if (iri.find(':') == std::string::npos)
					fail("relative IRI <" + iri + "> (no base support)");
				advance();
				return Term::iri(std::move(iri));
			}
			case Tok::Pname: {
				Term t = expandPname();
				advance();
				return t;
			}
			case Tok::Blank: {
				Term t = Term::blank(cur_.text);
				advance();
				return t;
			}
			case Tok::Var: {
				if (!inGraph) fail("variables are only allowed inside rule graphs");
				Term t = Term::variable(cur_.text);
				advance();
				return t;
			}
			case Tok::String: return parseStringLiteral();
			case Tok::Integer:
			case Tok::Decimal:
			case Tok::Double: {
				const char* dt = cur_.type == Tok::Integer
					? xsd::kInteger.data()
					: (cur_.type == Tok::Decimal ? xsd::kDecimal.data() : xsd::kDouble.data());
				Term raw = Term::literal(cur_.text, dt);
				Token at = cur_;
				advance();
				try {
					return formatNumeric(parseNumeric(raw));
				} catch (const NonNumericLiteral&) {
					throw ParseError(at.line, at.col, "malformed numeric literal '" + at.text + "'");
				}
			}
			case Tok::BoolTrue:
			case Tok::BoolFalse: {
				Term t = Term::boolean(cur_.type == Tok::BoolTrue);
				advance();
				return t;
			}
			case Tok::LParen: return parseCollection(out, inGraph);
			case Tok::LBracket: return parseBlankNodeProps(out, inGraph);
			default:
				fail(std::string("expected a term, found ") + tokName(cur_.type));
		}
	}

	Term parseStringLiteral() {
		std::string lexical = cur_.text;
		Token at = cur_;
		advance();
		if (cur_.type != Tok::CaretCaret) return Term::str(std::move(lexical));
		advance();
		Term dt;
		if (cur_.type == Tok::Iri) {
			if (cur_.text.find(':') == std::string::npos)
				fail("relative IRI <" + cur_.text + "> (no base support)");
			dt = Term::iri(cur_.text);
			advance();
		} else if (cur_.type == Tok::Pname) {
			dt = expandPname();
			advance();
		} else {
			fail("expected datatype IRI after '^^'");
		}
		if (dt.value() == xsd::kInteger || dt.value() == xsd::kDecimal || dt.value() == xsd::kDouble) {
			Term raw = Term::literal(lexical, dt.value());
			try {
				return formatNumeric(parseNumeric(raw));
			} catch (const NonNumericLiteral&) {
				throw ParseError(at.line, at.col,
					"lexical form '" + lexical + "' is invalid for its numeric datatype");
			}
		}
		return Term::literal(std::move(lexical), dt.value());
	}

	Term expandPname() {
		const std::string& pname = cur_.text;
		auto colon = pname.find(':');
		std::string prefix = pname.substr(0, colon);
		std::string local = pname.substr(colon + 1);
		auto it = doc_.prefixes.find(prefix);
		if (it == doc_.prefixes.end()) throw UnknownPrefix(cur_.line, cur_.col, prefix);
		return Term::iri(it->second + local);
	}

	Term parseCollection(std::vector<Triple>& out, bool inGraph) {
		advance();  // '('
		std::vector<Term> elems;
		while (cur_.type != Tok::RParen) {
			if (cur_.type == Tok::Eof) fail("unterminated collection (missing ')')");
			elems.push_back(parseTerm(out, inGraph, /*asPredicate=*/false));
		}
		advance();
		return Term::list(std::move(elems));
	}

	Term parseBlankNodeProps(std::vector<Triple>& out, bool inGraph) {
		advance();  // '['
		Term node = Term::blank("anon" + std::to_string(++anonCounter_));
		if (cur_.type != Tok::RBracket) {
			parsePredicateObjectList(node, out, inGraph);
			if (cur_.type != Tok::RBracket)
				fail(std::string("expected ']', found ") + tokName(cur_.type));
		}
		advance();
		return node;
	}

	// Conclusion variables must occur in the premise; conclusion blank nodes
	// are fresh-node markers and may not reuse premise blank labels.
	void checkRangeRestriction(const Graph& premise, const Graph& conclusion, const Token& at) {
		std::set<std::string> premiseVars, premiseBlanks;
		auto collect = [](const Term& t, std::set<std::string>& vars, std::set<std::string>& blanks,
			auto&& self) -> void {
			if (t.isVariable()) vars.insert(t.value());
			if (t.isBlank()) blanks.insert(t.value());
			if (t.isList())
				for (const Term& e : t.elements()) self(e, vars, blanks, self);
		};
		for (const Triple& t : premise) {
			for (const Term* term : {&t.subject, &t.predicate, &t.object})
				collect(*term, premiseVars, premiseBlanks, collect);
		}
		std::set<std::string> conclVars, conclBlanks;
		for (const Triple& t : conclusion) {
			for (const Term* term : {&t.subject, &t.predicate, &t.object})
				collect(*term, conclVars, conclBlanks, collect);
		}
		for (const std::string& v : conclVars) {
			if (!premiseVars.count(v))
				throw ParseError(at.line, at.col,
					"rule is not range-restricted: conclusion variable ?" + v +
						" does not occur in the premise");
		}
		for (const std::string& b : conclBlanks) {
			if (premiseBlanks.count(b))
				throw ParseError(at.line, at.col,
					"conclusion blank node _:" + b + " reuses a premise blank label");
		}
	}

	Lexer lexer_;
	Token cur_;
	Document doc_;
	int anonCounter_ = 0;
};

}  // namespace

Document parseDocument(std::string_view text) { return Parser(text).run(); }

Document parseFile(const std::filesystem::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot open " + path.string());
	std::ostringstream buf;
	buf << in.rdbuf();
	if (in.bad()) throw IoError("cannot read " + path.string());
	return parseDocument(buf.str());
}

}  // namespace qosflow
