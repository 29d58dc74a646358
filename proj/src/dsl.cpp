#include "pathcov/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <tuple>

namespace pathcov {

namespace {

struct Token {
  enum class Type { ident, number, arrow, bi_arrow } type;
  std::string text;
  int column = 0;
};

using Kind = ParseError::Kind;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
bool number_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '/' || c == '-' || c == '+';
}

std::vector<Token> tokenize(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (line.substr(i, 3) == "<->") {
      out.push_back({Token::Type::bi_arrow, "<->", col});
      i += 3;
    } else if (line.substr(i, 2) == "->") {
      out.push_back({Token::Type::arrow, "->", col});
      i += 2;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      out.push_back({Token::Type::ident, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (number_char(c)) {
      std::size_t j = i;
      while (j < line.size() && number_char(line[j])) ++j;
      out.push_back({Token::Type::number, std::string(line.substr(i, j - i)), col});
      i = j;
    } else {
      throw ParseError(Kind::syntax, line_no, col, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

struct Statement {
  int line = 0;
  std::vector<Token> tokens;
};

class Parser {
 public:
  explicit Parser(const Statement& s) : s_(s) {}

  const Token& ident(const char* what) {
    const Token& t = next(what);
    if (t.type != Token::Type::ident) fail(t, std::string("expected ") + what + ", found '" + t.text + "'");
    return t;
  }
  void keyword(const char* kw) {
    const Token& t = next(kw);
    if (t.type != Token::Type::ident || t.text != kw) {
      fail(t, std::string("expected '") + kw + "', found '" + t.text + "'");
    }
  }
  Rational number() {
    const Token& t = next("a number");
    if (t.type != Token::Type::number) fail(t, "expected a number, found '" + t.text + "'");
    try {
      return Rational::parse(t.text);
    } catch (const InputError& e) {
      fail(t, e.what());
    }
  }
  const Token& arrow() {
    const Token& t = next("'->' or '<->'");
    if (t.type != Token::Type::arrow && t.type != Token::Type::bi_arrow) {
      fail(t, "expected '->' or '<->', found '" + t.text + "'");
    }
    return t;
  }
  void end() {
    if (pos_ < s_.tokens.size()) fail(s_.tokens[pos_], "unexpected '" + s_.tokens[pos_].text + "'");
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg, Kind kind = Kind::syntax) const {
    throw ParseError(kind, s_.line, t.column, msg);
  }

 private:
  const Token& next(const std::string& what) {
    if (pos_ >= s_.tokens.size()) {
      const int col = s_.tokens.empty() ? 1 : s_.tokens.back().column + static_cast<int>(s_.tokens.back().text.size());
      throw ParseError(Kind::syntax, s_.line, col, "expected " + what + " before end of line");
    }
    return s_.tokens[pos_++];
  }

  const Statement& s_;
  std::size_t pos_ = 0;
};

}  // namespace

PathDiagram<Rational> parse_diagram(std::string_view text) {
  std::vector<Statement> nodes, edges;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t stop = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, stop - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    Statement s{line_no, tokenize(line, line_no)};
    if (!s.tokens.empty()) {
      const Token& head = s.tokens.front();
      if (head.type == Token::Type::ident && head.text == "node") {
        nodes.push_back(std::move(s));
      } else if (head.type == Token::Type::ident && head.text == "edge") {
        edges.push_back(std::move(s));
      } else {
        throw ParseError(Kind::syntax, line_no, head.column, "expected 'node' or 'edge', found '" + head.text + "'");
      }
    }
    if (stop == text.size()) break;
    start = stop + 1;
  }

  PathDiagram<Rational> d;
  for (const auto& s : nodes) {
    Parser p(s);
    p.keyword("node");
    const Token& id = p.ident("a node name");
    p.keyword("noise");
    Rational noise = p.number();
    p.end();
    if (d.graph().find(id.text)) p.fail(id, "duplicate node '" + id.text + "'", Kind::duplicate_node);
    try {
      d.add_node(id.text, std::move(noise));
    } catch (const DiagramError& e) {
      p.fail(id, e.what(), e.kind());
    }
  }
  for (const auto& s : edges) {
    Parser p(s);
    p.keyword("edge");
    const Token& a = p.ident("a node name");
    const Token& arrow = p.arrow();
    const Token& b = p.ident("a node name");
    const bool directed = arrow.type == Token::Type::arrow;
    p.keyword(directed ? "coef" : "cov");
    Rational value = p.number();
    p.end();
    const auto ia = d.graph().find(a.text);
    if (!ia) p.fail(a, "unknown node '" + a.text + "'", Kind::unknown_node);
    const auto ib = d.graph().find(b.text);
    if (!ib) p.fail(b, "unknown node '" + b.text + "'", Kind::unknown_node);
    try {
      if (directed) {
        d.add_edge(*ia, *ib, std::move(value));
      } else {
        d.add_covariance(*ia, *ib, std::move(value));
      }
    } catch (const DiagramError& e) {
      p.fail(a, e.what(), e.kind());
    }
  }
  return d;
}

PathDiagram<Rational> load_diagram(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read '" + file.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_diagram(buf.str());
}

std::string serialize(const PathDiagram<Rational>& d) {
  const Graph& g = d.graph();
  std::vector<NodeIndex> order(d.size());
  for (NodeIndex n = 0; n < d.size(); ++n) order[n] = n;
  std::ranges::sort(order, {}, [&](NodeIndex n) -> const std::string& { return g.name(n); });

  std::ostringstream out;
  for (NodeIndex n : order) out << "node " << g.name(n) << " noise " << d.noise(n) << "\n";

  std::vector<std::tuple<std::string, std::string, std::string>> lines;
  for (std::size_t k = 0; k < g.directed().size(); ++k) {
    const auto& e = g.directed()[k];
    lines.emplace_back(g.name(e.tail), g.name(e.head), d.coef(static_cast<int>(k)).str());
  }
  std::ranges::sort(lines);
  for (const auto& [a, b, v] : lines) out << "edge " << a << " -> " << b << " coef " << v << "\n";

  lines.clear();
  for (std::size_t k = 0; k < g.bidirected().size(); ++k) {
    const auto& e = g.bidirected()[k];
    auto a = g.name(e.a), b = g.name(e.b);
    if (b < a) std::swap(a, b);
    lines.emplace_back(a, b, d.errcov(static_cast<int>(k)).str());
  }
  std::ranges::sort(lines);
  for (const auto& [a, b, v] : lines) out << "edge " << a << " <-> " << b << " cov " << v << "\n";
  return out.str();
}

}  // namespace pathcov
