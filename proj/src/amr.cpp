#include <map>
#include <unordered_map>

#include "d2t/error.hpp"
#include "d2t/mr.hpp"
#include "d2t/strings.hpp"

namespace d2t {

namespace {

enum class TokKind { Open, Close, Slash, Role, Quoted, Symbol, End };

struct Tok {
  TokKind kind;
  std::string text;
  std::size_t offset;
};

bool is_symbol_char(char c) {
  return !strings::is_space(c) && c != '(' && c != ')' && c != '"' && c != '/';
}

// Bare symbols shaped like AMR variables (a letter optionally followed by
// digits) must resolve to a defined node; anything else is a constant.
bool looks_like_variable(std::string_view s) {
  if (s.empty() || !strings::is_lower(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!strings::is_digit(s[i])) return false;
  }
  return true;
}

void check_balance(std::string_view raw) {
  long depth = 0;
  bool in_quote = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (in_quote) {
      if (c == '\\') ++i;
      else if (c == '"') in_quote = false;
      continue;
    }
    if (c == '"') in_quote = true;
    else if (c == '(') ++depth;
    else if (c == ')' && --depth < 0) throw Error(ErrorCode::UnbalancedParens, "unexpected ')'");
  }
  if (depth != 0) throw Error(ErrorCode::UnbalancedParens, "missing ')'");
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Tok next() {
    while (pos_ < src_.size() && strings::is_space(src_[pos_])) ++pos_;
    if (pos_ >= src_.size()) return {TokKind::End, {}, pos_};
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (c == '(') return ++pos_, Tok{TokKind::Open, "(", start};
    if (c == ')') return ++pos_, Tok{TokKind::Close, ")", start};
    if (c == '/') return ++pos_, Tok{TokKind::Slash, "/", start};
    if (c == '"') {
      std::string text;
      ++pos_;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
        text += src_[pos_++];
      }
      if (pos_ >= src_.size()) throw Error(ErrorCode::MalformedAmr, "unterminated string literal");
      ++pos_;
      return {TokKind::Quoted, std::move(text), start};
    }
    while (pos_ < src_.size() && is_symbol_char(src_[pos_])) ++pos_;
    std::string text(src_.substr(start, pos_ - start));
    if (text[0] == ':') {
      if (text.size() == 1) throw Error(ErrorCode::MalformedAmr, "empty role at offset " + std::to_string(start));
      return {TokKind::Role, std::move(text), start};
    }
    return {TokKind::Symbol, std::move(text), start};
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

struct PendingSymbol {
  std::size_t node;
  std::size_t edge;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  AmrGraph run() {
    expect(TokKind::Open, "graph must start with '('");
    parse_node();
    if (cur_.kind != TokKind::End) fail("trailing content after root node");
    resolve_symbols();
    return std::move(graph_);
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::MalformedAmr, what + " at offset " + std::to_string(cur_.offset));
  }

  void expect(TokKind kind, const char* what) {
    if (cur_.kind != kind) fail(what);
    advance();
  }

  // Called with the opening '(' already consumed.
  std::size_t parse_node() {
    if (cur_.kind != TokKind::Symbol) fail("expected variable");
    std::string var = cur_.text;
    advance();
    expect(TokKind::Slash, "expected '/' after variable");
    if (cur_.kind != TokKind::Symbol) fail("expected concept");
    std::string concept_name = cur_.text;
    advance();

    if (!defined_.emplace(var, graph_.nodes.size()).second) {
      throw Error(ErrorCode::DuplicateVariable, "variable '" + var + "' defined twice");
    }
    const std::size_t self = graph_.nodes.size();
    graph_.nodes.push_back(AmrNode{std::move(var), std::move(concept_name), {}});

    while (cur_.kind == TokKind::Role) {
      AmrEdge edge;
      edge.role = cur_.text;
      advance();
      switch (cur_.kind) {
        case TokKind::Open: {
          advance();
          edge.kind = AmrEdgeKind::Child;
          edge.target = parse_node();
          break;
        }
        case TokKind::Quoted:
          edge.kind = AmrEdgeKind::Attribute;
          edge.value = cur_.text;
          edge.quoted = true;
          advance();
          break;
        case TokKind::Symbol:
          edge.kind = AmrEdgeKind::Attribute;
          edge.value = cur_.text;
          pending_.push_back({self, graph_.nodes[self].edges.size()});
          advance();
          break;
        default:
          fail("expected value after role " + edge.role);
      }
      graph_.nodes[self].edges.push_back(std::move(edge));
    }
    expect(TokKind::Close, "expected ')' or role");
    return self;
  }

  void resolve_symbols() {
    for (const auto& p : pending_) {
      AmrEdge& edge = graph_.nodes[p.node].edges[p.edge];
      auto it = defined_.find(edge.value);
      if (it != defined_.end()) {
        edge.kind = AmrEdgeKind::Reentrancy;
        edge.target = it->second;
        edge.value.clear();
      } else if (looks_like_variable(edge.value)) {
        throw Error(ErrorCode::DanglingReference, "reference to undefined variable '" + edge.value + "'");
      }
    }
  }

  Lexer lex_;
  Tok cur_{TokKind::End, {}, 0};
  AmrGraph graph_;
  std::unordered_map<std::string, std::size_t> defined_;
  std::vector<PendingSymbol> pending_;
};

void serialize_node(const AmrGraph& g, std::size_t idx, std::string& out) {
  const AmrNode& n = g.nodes[idx];
  out += '(';
  out += n.variable;
  out += " / ";
  out += n.concept_name;
  for (const auto& e : n.edges) {
    out += ' ';
    out += e.role;
    out += ' ';
    switch (e.kind) {
      case AmrEdgeKind::Child: serialize_node(g, e.target, out); break;
      case AmrEdgeKind::Reentrancy: out += g.nodes[e.target].variable; break;
      case AmrEdgeKind::Attribute:
        if (e.quoted) {
          out += '"';
          for (char c : e.value) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
          }
          out += '"';
        } else {
          out += e.value;
        }
        break;
    }
  }
  out += ')';
}

bool iso_nodes(const AmrGraph& a, std::size_t ia, const AmrGraph& b, std::size_t ib,
               std::map<std::size_t, std::size_t>& mapping) {
  auto [it, inserted] = mapping.emplace(ia, ib);
  if (!inserted) return it->second == ib;
  const AmrNode& na = a.nodes[ia];
  const AmrNode& nb = b.nodes[ib];
  if (na.concept_name != nb.concept_name || na.edges.size() != nb.edges.size()) return false;
  for (std::size_t k = 0; k < na.edges.size(); ++k) {
    const AmrEdge& ea = na.edges[k];
    const AmrEdge& eb = nb.edges[k];
    if (ea.role != eb.role || ea.kind != eb.kind) return false;
    if (ea.kind == AmrEdgeKind::Attribute) {
      if (ea.value != eb.value || ea.quoted != eb.quoted) return false;
    } else if (!iso_nodes(a, ea.target, b, eb.target, mapping)) {
      return false;
    }
  }
  return true;
}

}  // namespace

AmrGraph parse_amr(std::string_view raw) {
  check_balance(raw);
  return Parser(raw).run();
}

std::string serialize_amr(const AmrGraph& mr) {
  std::string out;
  if (!mr.nodes.empty()) serialize_node(mr, 0, out);
  return out;
}

bool amr_isomorphic(const AmrGraph& a, const AmrGraph& b) {
  if (a.nodes.size() != b.nodes.size() || a.nodes.empty()) return a.nodes.size() == b.nodes.size();
  std::map<std::size_t, std::size_t> mapping;
  if (!iso_nodes(a, 0, b, 0, mapping)) return false;
  // The mapping must be injective for the structures to be isomorphic.
  std::map<std::size_t, std::size_t> inverse;
  for (auto [x, y] : mapping) {
    if (!inverse.emplace(y, x).second) return false;
  }
  return true;
}

}  // namespace d2t
