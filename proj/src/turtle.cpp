#include "alignkit/turtle.hpp"

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace alignkit {

TurtleError::TurtleError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class TokenType { IriRef, PrefixedName, A, String, DoubleCaret, Dot, Semicolon, Comma,
                       PrefixDirective, End };

struct Token {
  TokenType type;
  std::string text;  // IRI body, full prefixed name, or unescaped string
  Position pos;
};

bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Position start = pos_;
    if (at_end()) return {TokenType::End, "", start};
    char c = peek();
    switch (c) {
      case '<': return lex_iri(start);
      case '"': return lex_string(start);
      case '.': advance(); return {TokenType::Dot, ".", start};
      case ';': advance(); return {TokenType::Semicolon, ";", start};
      case ',': advance(); return {TokenType::Comma, ",", start};
      case '^':
        advance();
        if (at_end() || peek() != '^') fail("expected '^^'", start);
        advance();
        return {TokenType::DoubleCaret, "^^", start};
      case '@': return lex_directive(start);
      case '[': case '(': case '_':
        if (c == '_' && (offset_ + 1 >= text_.size() || text_[offset_ + 1] != ':')) break;
        fail("blank nodes and collections are not supported", start);
      default: break;
    }
    return lex_name(start);
  }

  [[noreturn]] void fail(const std::string& message, Position at) const {
    throw TurtleError(message, at.line, at.column);
  }

 private:
  bool at_end() const { return offset_ >= text_.size(); }
  char peek() const { return text_[offset_]; }

  void advance() {
    char c = text_[offset_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++pos_.column;  // count codepoints, not continuation bytes
    }
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  Token lex_iri(Position start) {
    advance();
    std::string body;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated IRI", start);
      char c = peek();
      if (c == '>') break;
      if (c == '\\') fail("escapes in IRIs are not supported", pos_);
      body.push_back(c);
      advance();
    }
    advance();
    return {TokenType::IriRef, std::move(body), start};
  }

  Token lex_string(Position start) {
    advance();
    std::string body;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string literal", start);
      char c = peek();
      if (c == '"') break;
      if (c == '\\') {
        Position esc = pos_;
        advance();
        if (at_end()) fail("unterminated escape", esc);
        switch (peek()) {
          case 'n': body.push_back('\n'); break;
          case 'r': body.push_back('\r'); break;
          case 't': body.push_back('\t'); break;
          case '"': body.push_back('"'); break;
          case '\\': body.push_back('\\'); break;
          case '\'': body.push_back('\''); break;
          default: fail("unsupported string escape", esc);
        }
        advance();
        continue;
      }
      body.push_back(c);
      advance();
    }
    advance();
    if (!at_end() && peek() == '@') fail("language tags are not supported", pos_);
    return {TokenType::String, std::move(body), start};
  }

  Token lex_directive(Position start) {
    advance();
    std::string word;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) {
      word.push_back(peek());
      advance();
    }
    if (word != "prefix") fail("unknown directive '@" + word + "'", start);
    return {TokenType::PrefixDirective, "@prefix", start};
  }

  Token lex_name(Position start) {
    std::string word;
    while (!at_end()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (is_name_char(c) || c == ':') {
        word.push_back(static_cast<char>(c));
        advance();
      } else if (c == '%') {
        word.push_back('%');
        advance();
        for (int i = 0; i < 2; ++i) {
          if (at_end() || !std::isxdigit(static_cast<unsigned char>(peek()))) {
            fail("malformed percent escape in name", start);
          }
          word.push_back(peek());
          advance();
        }
      } else {
        break;
      }
    }
    // A trailing '.' ends the statement rather than the name.
    while (!word.empty() && word.back() == '.') {
      word.pop_back();
      --offset_;
      --pos_.column;
    }
    if (word.empty()) fail(std::string("unexpected character '") + peek() + "'", start);
    if (word == "a") return {TokenType::A, word, start};
    if (word.find(':') == std::string::npos) fail("unexpected token '" + word + "'", start);
    return {TokenType::PrefixedName, std::move(word), start};
  }

  std::string_view text_;
  std::size_t offset_ = 0;
  Position pos_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {
    prefixes_["rdf"] = std::string(vocab::kRdf);
    prefixes_["rdfs"] = std::string(vocab::kRdfs);
    prefixes_["owl"] = std::string(vocab::kOwl);
    prefixes_["xsd"] = std::string(vocab::kXsd);
    shift();
  }

  Ontology parse() {
    while (current_.type != TokenType::End) {
      if (current_.type == TokenType::PrefixDirective) {
        parse_prefix();
      } else {
        parse_statement();
      }
    }
    try {
      return builder_.build();
    } catch (const OntologyError& e) {
      Position at;
      if (e.culprit()) {
        auto it = positions_.find(*e.culprit());
        if (it != positions_.end()) at = it->second;
      }
      throw TurtleError(e.what(), at.line, at.column);
    }
  }

 private:
  void shift() { current_ = lexer_.next(); }

  void expect(TokenType type, const char* what) {
    if (current_.type != type) lexer_.fail(std::string("expected ") + what, current_.pos);
    shift();
  }

  void parse_prefix() {
    shift();
    if (current_.type != TokenType::PrefixedName || current_.text.back() != ':' ||
        current_.text.find(':') != current_.text.size() - 1) {
      lexer_.fail("expected a prefix name ending in ':'", current_.pos);
    }
    std::string name = current_.text.substr(0, current_.text.size() - 1);
    shift();
    if (current_.type != TokenType::IriRef) lexer_.fail("expected <IRI> after prefix", current_.pos);
    std::string ns = current_.text;
    make_iri(ns, current_.pos);
    prefixes_[name] = ns;
    if (name.empty()) {
      std::string base = ns;
      if (!base.empty() && (base.back() == '#' || base.back() == '/')) base.pop_back();
      builder_.set_base_iri(make_iri(base, current_.pos));
    }
    shift();
    expect(TokenType::Dot, "'.' after @prefix directive");
  }

  void parse_statement() {
    Position start = current_.pos;
    Iri subject = parse_iri("subject");
    while (true) {
      Iri predicate = current_.type == TokenType::A ? (shift(), vocab::rdf_type())
                                                    : parse_iri("predicate");
      while (true) {
        Position object_pos = current_.pos;
        Term object = parse_object();
        Triple t{subject, predicate, std::move(object)};
        positions_.emplace(t, object_pos);
        builder_.add(std::move(t));
        if (current_.type != TokenType::Comma) break;
        shift();
      }
      if (current_.type != TokenType::Semicolon) break;
      shift();
      if (current_.type == TokenType::Dot) break;
    }
    if (current_.type != TokenType::Dot) {
      lexer_.fail("expected '.' to end the statement started here", start);
    }
    shift();
  }

  Term parse_object() {
    if (current_.type != TokenType::String) return parse_iri("object");
    std::string lexical = current_.text;
    Position at = current_.pos;
    shift();
    Datatype datatype = Datatype::String;
    if (current_.type == TokenType::DoubleCaret) {
      shift();
      Iri dt = parse_iri("datatype");
      static const std::array kTypes = {Datatype::Integer, Datatype::Decimal, Datatype::Boolean,
                                        Datatype::String};
      bool known = false;
      for (auto candidate : kTypes) {
        if (dt.str() == xsd_iri(candidate)) {
          datatype = candidate;
          known = true;
        }
      }
      if (!known) lexer_.fail("unsupported datatype <" + dt.str() + ">", at);
    }
    if (!Literal::lexical_matches(lexical, datatype)) {
      lexer_.fail("'" + lexical + "' is not a valid xsd:" + std::string(to_string(datatype)), at);
    }
    return Literal(std::move(lexical), datatype);
  }

  Iri parse_iri(const char* role) {
    Position at = current_.pos;
    if (current_.type == TokenType::IriRef) {
      Iri iri = make_iri(current_.text, at);
      shift();
      return iri;
    }
    if (current_.type == TokenType::PrefixedName) {
      auto colon = current_.text.find(':');
      std::string prefix = current_.text.substr(0, colon);
      auto it = prefixes_.find(prefix);
      if (it == prefixes_.end()) lexer_.fail("undeclared prefix '" + prefix + ":'", at);
      Iri iri = make_iri(it->second + current_.text.substr(colon + 1), at);
      shift();
      return iri;
    }
    lexer_.fail(std::string("expected an IRI as ") + role, at);
  }

  Iri make_iri(const std::string& text, Position at) const {
    if (!Iri::is_valid(text)) lexer_.fail("not an absolute IRI: '" + text + "'", at);
    return Iri(text);
  }

  Lexer lexer_;
  Token current_{TokenType::End, "", {}};
  std::map<std::string, std::string> prefixes_;
  std::map<Triple, Position> positions_;
  OntologyBuilder builder_;
};

bool is_safe_local(std::string_view local) {
  if (local.empty() || local.front() == '.' || local.front() == '-' || local.back() == '.') {
    return false;
  }
  for (std::size_t i = 0; i < local.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(local[i]);
    if (c == '%') {
      if (i + 2 >= local.size() || !std::isxdigit(static_cast<unsigned char>(local[i + 1])) ||
          !std::isxdigit(static_cast<unsigned char>(local[i + 2]))) {
        return false;
      }
      i += 2;
    } else if (!is_name_char(c)) {
      return false;
    }
  }
  return true;
}

class Writer {
 public:
  explicit Writer(const Ontology& o) {
    if (o.base_iri()) prefixes_.emplace_back("", o.base_iri()->str() + "#");
    prefixes_.emplace_back("owl", std::string(vocab::kOwl));
    prefixes_.emplace_back("rdf", std::string(vocab::kRdf));
    prefixes_.emplace_back("rdfs", std::string(vocab::kRdfs));
    prefixes_.emplace_back("xsd", std::string(vocab::kXsd));
  }

  std::string prefix_block() const {
    std::string out;
    for (const auto& [name, ns] : prefixes_) out += "@prefix " + name + ": <" + ns + "> .\n";
    return out;
  }

  std::string iri(const Iri& value) const {
    for (const auto& [name, ns] : prefixes_) {
      const auto& s = value.str();
      if (s.size() > ns.size() && s.compare(0, ns.size(), ns) == 0) {
        std::string_view local(s.data() + ns.size(), s.size() - ns.size());
        if (is_safe_local(local)) return name + ":" + std::string(local);
      }
    }
    return "<" + value.str() + ">";
  }

  std::string term(const Term& t) const {
    if (is_iri(t)) return iri(as_iri(t));
    const auto& lit = std::get<Literal>(t);
    std::string out = "\"";
    for (char c : lit.lexical()) {
      switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
      }
    }
    out += "\"";
    if (lit.datatype() != Datatype::String) out += "^^xsd:" + std::string(to_string(lit.datatype()));
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> prefixes_;
};

}  // namespace

Ontology parse_turtle(std::string_view text) { return Parser(text).parse(); }

std::string serialize_turtle(const Ontology& ontology) {
  Writer w(ontology);
  std::string out = w.prefix_block();
  if (!ontology.triples().empty()) out += "\n";
  for (const auto& t : ontology.triples()) {
    std::string predicate = t.predicate == vocab::rdf_type() ? "a" : w.iri(t.predicate);
    out += w.iri(t.subject) + " " + predicate + " " + w.term(t.object) + " .\n";
  }
  return out;
}

}  // namespace alignkit
