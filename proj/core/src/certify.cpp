#include "lotva/certify.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "lotva/complex.hpp"
#include "lotva/error.hpp"
#include "lotva/linkage.hpp"
#include "lotva/weights.hpp"

namespace lotva {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t count_nodes(const Certificate& c) {
  std::size_t n = 1;
  for (const auto& k : c.children) n += count_nodes(k);
  return n;
}

EdgeSet origin_of(const EdgeSet& ids, const std::vector<EdgeId>& origin) {
  EdgeSet out;
  for (EdgeId e : ids) out.push_back(origin[e]);
  std::sort(out.begin(), out.end());
  return out;
}

// Both signed links of the (reoriented) lot relative to the sub-LOT family,
// using linkage primitives only.
struct Forests {
  ForestResult plus, minus;
};

Forests relative_forests(const Lot& lot, std::span<const SubLot> sublots) {
  TwoComplex cx = build_complex(lot);
  SubcomplexFamily fam = derive_subcomplexes(lot, sublots);
  LinkGraph link = build_link(cx);
  auto pb = sublink_blocks(cx, link, fam, Polarity::plus);
  auto mb = sublink_blocks(cx, link, fam, Polarity::minus);
  return {relative_forest_check(polarity_subgraph(link, Polarity::plus), pb),
          relative_forest_check(polarity_subgraph(link, Polarity::minus), mb)};
}

// ------------------------------------------------------------------ search

struct Failure {
  FailureReport report;
};

Certificate certify_node(const Lot& lot);

Certificate certify_prime(const Lot& lot) {
  auto flipped = orientation_search(lot);
  if (!flipped) throw Failure{{"prime-wt", to_text(lot), "no orientation makes both signed links forests"}};
  Lot turned = reorient(lot, *flipped);
  auto f = signed_forests(turned, {});
  return {cert::PrimeWeightTest{*flipped, {f.plus.components, f.minus.components}}, {}};
}

Certificate certify_complete_set(const Lot& lot, const CompleteSet& set) {
  cert::CompleteSet node;
  Lot current = lot;
  for (const auto& step : set.chain.steps) {
    node.chain.push_back({step.sublot.edges, current.vertex_name(step.collapse_vertex)});
    current = collapse(current, step.sublot).quotient;
  }
  for (const auto& s : set.sublots) node.sublots.push_back(s.edges);

  auto flipped = orientation_search(lot, set.sublots);
  if (!flipped)
    throw Failure{{"complete-set", to_text(lot), "no orientation outside the sub-LOTs gives relative forests"}};
  node.flipped = *flipped;
  auto f = signed_forests(reorient(lot, *flipped), set.sublots);
  node.witness = {f.plus.components, f.minus.components};

  Certificate out{std::move(node), {}};
  for (const auto& s : set.sublots) out.children.push_back(certify_node(induced_lot(lot, s).lot));
  return out;
}

Certificate certify_node(const Lot& lot) {
  if (lot.edge_count() <= 1) return {cert::Base{lot.edge_count()}, {}};
  if (auto b = find_boundary_reduction(lot)) {
    Certificate out{cert::BoundaryReduction{b->edge, lot.vertex_name(b->outer)}, {}};
    out.children.push_back(certify_node(remove_leaf(lot, b->edge, b->outer).lot));
    return out;
  }
  auto subs = enumerate_sublots(lot);
  if (subs.maximal_proper.empty()) return certify_prime(lot);
  if (auto fd = free_decomposition(lot)) {
    Certificate out{cert::FreeDecomposition{fd->left, fd->right, lot.vertex_name(fd->shared)}, {}};
    out.children.push_back(certify_node(induced_lot(lot, SubLot{fd->left}).lot));
    out.children.push_back(certify_node(induced_lot(lot, SubLot{fd->right}).lot));
    return out;
  }
  if (auto set = complete_set_search(lot)) return certify_complete_set(lot, *set);
  throw Failure{{"dispatch", to_text(lot), "reduced non-prime lot with neither a free decomposition nor a complete set"}};
}

// ---------------------------------------------------------------- verifier

struct Reject {
  std::string check;
  std::string message;
};

[[noreturn]] void reject(std::string check, std::string message) { throw Reject{std::move(check), std::move(message)}; }

void expect(bool ok, const char* check, const std::string& message) {
  if (!ok) reject(check, message);
}

bool valid_ids(const EdgeSet& s, std::size_t edge_count) {
  if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
  return std::all_of(s.begin(), s.end(), [&](EdgeId e) { return e < edge_count; });
}

std::string set_text(const EdgeSet& s) {
  if (s.empty()) return "-";
  std::string out;
  for (EdgeId e : s) out += (out.empty() ? "" : ",") + std::to_string(e);
  return out;
}

void verify_node(const Lot& lot, const Certificate& c, std::string& path);

void verify_children(const Lot& lot, const Certificate& c, std::string& path, const std::vector<Lot>& expected) {
  expect(c.children.size() == expected.size(), "children",
         "expected " + std::to_string(expected.size()) + " children, found " + std::to_string(c.children.size()));
  for (std::size_t i = 0; i < expected.size(); ++i) {
    std::size_t mark = path.size();
    path += "/" + std::to_string(i);
    verify_node(expected[i], c.children[i], path);
    path.resize(mark);
  }
  (void)lot;
}

void verify_base(const Lot& lot, const Certificate& c, const cert::Base& n, std::string& path) {
  expect(lot.edge_count() <= 1 && n.edges == lot.edge_count(), "base-size",
         "base node on a lot with " + std::to_string(lot.edge_count()) + " edges");
  verify_children(lot, c, path, {});
}

void verify_boundary(const Lot& lot, const Certificate& c, const cert::BoundaryReduction& n, std::string& path) {
  auto outer = lot.find_vertex(n.outer);
  expect(outer && n.edge < lot.edge_count() && lot.degree(*outer) == 1 && lot.incident(*outer)[0] == n.edge,
         "bdry-red-leaf", "edge " + std::to_string(n.edge) + " is not a leaf edge at '" + n.outer + "'");
  expect(!(lot.labels_of(lot.all_edges()) >> *outer & 1), "bdry-red-label",
         "'" + n.outer + "' occurs as an edge label");
  verify_children(lot, c, path, {remove_leaf(lot, n.edge, *outer).lot});
}

void verify_free(const Lot& lot, const Certificate& c, const cert::FreeDecomposition& n, std::string& path) {
  const std::size_t m = lot.edge_count();
  bool partition = valid_ids(n.left, m) && valid_ids(n.right, m) && !n.left.empty() && !n.right.empty() &&
                   (to_mask(n.left) & to_mask(n.right)) == 0 && (to_mask(n.left) | to_mask(n.right)) == lot.all_edges();
  expect(partition, "free-dec-partition", "left and right do not partition the edges");
  expect(is_sublot(lot, to_mask(n.left)) && is_sublot(lot, to_mask(n.right)), "free-dec-sublot",
         "a half is not a sub-LOT");
  std::uint64_t common = lot.vertices_of(to_mask(n.left)) & lot.vertices_of(to_mask(n.right));
  auto shared = lot.find_vertex(n.shared);
  expect(shared && common == (std::uint64_t{1} << *shared), "free-dec-shared",
         "the halves do not meet exactly in '" + n.shared + "'");
  verify_children(lot, c, path, {induced_lot(lot, SubLot{n.left}).lot, induced_lot(lot, SubLot{n.right}).lot});
}

void verify_prime(const Lot& lot, const Certificate& c, const cert::PrimeWeightTest& n, std::string& path) {
  expect(enumerate_sublots(lot).maximal_proper.empty(), "prime", "the lot has a proper sub-LOT");
  expect(valid_ids(n.flipped, lot.edge_count()), "flipped-range", "flipped set " + set_text(n.flipped) + " is malformed");
  auto f = relative_forests(reorient(lot, n.flipped), {});
  expect(f.plus.is_forest && f.minus.is_forest, "prime-forest",
         std::string("lk") + (f.plus.is_forest ? "-" : "+") + " of the reoriented lot has a cycle");
  expect(n.witness == ForestWitness{f.plus.components, f.minus.components}, "witness",
         "recorded component counts differ from the recomputed ones");
  verify_children(lot, c, path, {});
}

void verify_complete(const Lot& lot, const Certificate& c, const cert::CompleteSet& n, std::string& path) {
  const std::size_t m = lot.edge_count();
  bool well_formed = !n.sublots.empty();
  for (const auto& s : n.sublots) well_formed = well_formed && !s.empty() && valid_ids(s, m);
  expect(well_formed, "complete-set-sublot", "malformed sub-LOT list");

  EdgeMask used_edges = 0;
  std::uint64_t used_vertices = 0;
  for (const auto& s : n.sublots) {
    EdgeMask em = to_mask(s);
    std::uint64_t vm = lot.vertices_of(em);
    expect(!(em & used_edges) && !(vm & used_vertices), "complete-set-disjoint",
           "sub-LOT " + set_text(s) + " meets an earlier one");
    used_edges |= em;
    used_vertices |= vm;
  }

  std::vector<SubLot> sublots;
  for (const auto& s : n.sublots) sublots.push_back(SubLot{s});
  SubcomplexFamily fam;
  try {
    fam = derive_subcomplexes(lot, sublots);
  } catch (const Error& e) {
    reject("complete-set-sublot", e.what());
  }
  TwoComplex cx = build_complex(lot);
  auto full = is_full(cx, fam);
  for (std::size_t i = 0; i < full.size(); ++i)
    expect(full[i], "full", "the subcomplex of " + set_text(n.sublots[i]) + " is not full");

  expect(valid_ids(n.flipped, m), "flipped-range", "flipped set " + set_text(n.flipped) + " is malformed");
  TwoComplex turned_cx = build_complex(reorient(lot, n.flipped));
  for (const auto& part : fam.parts)
    for (std::size_t cell : part.cells)
      expect(exponent_sum(turned_cx.cell(cell).boundary) == 0, "exponent-sum",
             "cell '" + turned_cx.cell(cell).name + "' has nonzero exponent sum");
  expect(!(to_mask(n.flipped) & used_edges), "flipped-in-sublot", "a flipped edge lies inside a sub-LOT");

  expect(n.chain.size() == n.sublots.size(), "chain-preimage", "chain length differs from the number of sub-LOTs");
  Lot current = lot;
  std::vector<EdgeId> origin(m);
  std::iota(origin.begin(), origin.end(), EdgeId{0});
  for (std::size_t i = 0; i < n.chain.size(); ++i) {
    const auto& step = n.chain[i];
    auto subs = enumerate_sublots(current);
    bool maximal = valid_ids(step.sublot, current.edge_count()) &&
                   std::find(subs.maximal_proper.begin(), subs.maximal_proper.end(), SubLot{step.sublot}) !=
                       subs.maximal_proper.end();
    expect(maximal, "chain-maximal", "step " + std::to_string(i) + " is not a maximal proper sub-LOT");
    CollapseResult col;
    try {
      col = collapse(current, SubLot{step.sublot});
    } catch (const Error& e) {
      reject("chain-maximal", e.what());
    }
    expect(current.vertex_name(col.collapse_vertex) == step.vertex, "chain-collapse-vertex",
           "step " + std::to_string(i) + " collapses to '" + current.vertex_name(col.collapse_vertex) + "', not '" +
               step.vertex + "'");
    expect(origin_of(step.sublot, origin) == n.sublots[i], "chain-preimage",
           "step " + std::to_string(i) + " does not lift to " + set_text(n.sublots[i]));
    std::vector<EdgeId> next;
    for (EdgeId e : col.edge_origin) next.push_back(origin[e]);
    origin = std::move(next);
    current = std::move(col.quotient);
  }
  expect(current.edge_count() >= 1 && is_compressed(current) && is_injective(current) &&
             enumerate_sublots(current).maximal_proper.empty(),
         "chain-final", "the final quotient is not a compressed injective prime lot with an edge");

  for (const auto& s : sublots) expect(is_sublot(lot, s), "complete-set-sublot", set_text(s.edges) + " is not a sub-LOT");

  auto f = relative_forests(reorient(lot, n.flipped), sublots);
  expect(f.plus.is_forest && f.minus.is_forest, "relative-forest",
         std::string("lk") + (f.plus.is_forest ? "-" : "+") + " is not a forest relative to the sub-LOTs");
  expect(n.witness == ForestWitness{f.plus.components, f.minus.components}, "witness",
         "recorded component counts differ from the recomputed ones");

  std::vector<Lot> kids;
  for (const auto& s : sublots) kids.push_back(induced_lot(lot, s).lot);
  verify_children(lot, c, path, kids);
}

void verify_node(const Lot& lot, const Certificate& c, std::string& path) {
  std::visit(overloaded{
                 [&](const cert::Base& n) { verify_base(lot, c, n, path); },
                 [&](const cert::BoundaryReduction& n) { verify_boundary(lot, c, n, path); },
                 [&](const cert::FreeDecomposition& n) { verify_free(lot, c, n, path); },
                 [&](const cert::PrimeWeightTest& n) { verify_prime(lot, c, n, path); },
                 [&](const cert::CompleteSet& n) { verify_complete(lot, c, n, path); },
             },
             c.node);
}

}  // namespace

std::size_t Certificate::size() const { return count_nodes(*this); }

CertifyResult certify_va(const Lot& lot) {
  if (!is_injective(lot)) throw PreconditionError("lot is not injective");
  if (!is_compressed(lot)) throw PreconditionError("lot is not compressed");
  try {
    return {certify_node(lot), std::nullopt};
  } catch (Failure& f) {
    return {std::nullopt, std::move(f.report)};
  }
}

VerifyVerdict verify_certificate(const Lot& lot, const Certificate& cert) {
  std::string path = "root";
  try {
    expect(is_injective(lot) && is_compressed(lot), "precondition", "lot is not injective and compressed");
    verify_node(lot, cert, path);
  } catch (Reject& r) {
    return {false, std::move(r.check), std::move(r.message), path};
  }
  return {};
}

// ----------------------------------------------------------- serialization

namespace {

void emit(std::ostream& out, const Certificate& c, std::size_t indent) {
  const std::string pad(indent + 2, ' ');
  auto child = [&](std::size_t i, std::size_t extra) {
    out << '\n' << std::string(indent + 2 + extra, ' ');
    emit(out, c.children.at(i), indent + 2 + extra);
  };
  std::visit(overloaded{
                 [&](const cert::Base& n) { out << "(base edges=" << n.edges; },
                 [&](const cert::BoundaryReduction& n) {
                   out << "(bdry-red edge=" << n.edge << " outer=" << n.outer;
                   for (std::size_t i = 0; i < c.children.size(); ++i) child(i, 0);
                 },
                 [&](const cert::FreeDecomposition& n) {
                   out << "(free-dec left=" << set_text(n.left) << " right=" << set_text(n.right)
                       << " shared=" << n.shared;
                   for (std::size_t i = 0; i < c.children.size(); ++i) child(i, 0);
                 },
                 [&](const cert::PrimeWeightTest& n) {
                   out << "(prime-wt flipped=" << set_text(n.flipped) << " plus-components="
                       << n.witness.plus_components << " minus-components=" << n.witness.minus_components;
                 },
                 [&](const cert::CompleteSet& n) {
                   out << "(complete-set flipped=" << set_text(n.flipped) << " plus-components="
                       << n.witness.plus_components << " minus-components=" << n.witness.minus_components;
                   for (const auto& s : n.chain)
                     out << '\n' << pad << "(step sublot=" << set_text(s.sublot) << " vertex=" << s.vertex << ')';
                   for (std::size_t i = 0; i < n.sublots.size(); ++i) {
                     out << '\n' << pad << "(sublot edges=" << set_text(n.sublots[i]);
                     if (i < c.children.size()) child(i, 2);
                     out << ')';
                   }
                 },
             },
             c.node);
  out << ')';
}

struct Tok {
  std::string text;
  std::size_t line, column;
};

std::vector<Tok> lex(std::string_view text) {
  std::vector<Tok> toks;
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size();) {
    char ch = text[i];
    if (ch == '\n') {
      ++line, col = 1, ++i;
    } else if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i, ++col;
    } else if (ch == '(' || ch == ')') {
      toks.push_back({std::string(1, ch), line, col});
      ++i, ++col;
    } else {
      std::size_t start = i, c0 = col;
      while (i < text.size() && text[i] != '(' && text[i] != ')' && text[i] != '#' &&
             !std::isspace(static_cast<unsigned char>(text[i])))
        ++i, ++col;
      toks.push_back({std::string(text.substr(start, i - start)), line, c0});
    }
  }
  return toks;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  Certificate document() {
    Certificate c = node();
    if (pos_ != toks_.size()) fail(toks_[pos_], "unexpected text after the certificate");
    return c;
  }

 private:
  using Attrs = std::map<std::string, std::pair<std::string, const Tok*>>;

  [[noreturn]] void fail(const Tok& at, const std::string& what) const {
    throw ParseError(ParseError::Kind::syntax, at.line, at.column, what);
  }
  [[noreturn]] void fail_end(const std::string& what) const {
    if (toks_.empty()) throw ParseError(ParseError::Kind::syntax, 1, 0, what);
    const Tok& last = toks_.back();
    throw ParseError(ParseError::Kind::syntax, last.line, last.column, what);
  }
  const Tok& peek() const {
    if (pos_ >= toks_.size()) fail_end("unexpected end of certificate");
    return toks_[pos_];
  }
  const Tok& take() {
    const Tok& t = peek();
    ++pos_;
    return t;
  }
  void open() {
    const Tok& t = take();
    if (t.text != "(") fail(t, "expected '('");
  }
  void close() {
    const Tok& t = take();
    if (t.text != ")") fail(t, "expected ')'");
  }

  // Keyword and attributes up to the first '(' or ')'.
  std::pair<const Tok*, Attrs> head() {
    open();
    const Tok* kw = &take();
    Attrs attrs;
    while (peek().text != "(" && peek().text != ")") {
      const Tok& t = take();
      auto eq = t.text.find('=');
      if (eq == std::string::npos || eq == 0) fail(t, "expected KEY=VALUE, got '" + t.text + "'");
      if (!attrs.emplace(t.text.substr(0, eq), std::pair{t.text.substr(eq + 1), &t}).second)
        fail(t, "repeated attribute");
    }
    return {kw, std::move(attrs)};
  }

  const std::string& attr(const Tok& kw, Attrs& a, const std::string& key) {
    auto it = a.find(key);
    if (it == a.end()) fail(kw, "'" + kw.text + "' needs " + key + "=");
    it->second.second = nullptr;  // mark consumed
    return it->second.first;
  }
  void done(const Attrs& a) {
    for (const auto& [k, v] : a)
      if (v.second) fail(*v.second, "unknown attribute '" + k + "'");
  }

  std::size_t number(const Tok& kw, const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) fail(kw, "expected a number, got '" + s + "'");
    return v;
  }
  EdgeSet edges(const Tok& kw, const std::string& s) {
    EdgeSet out;
    if (s == "-") return out;
    std::size_t start = 0;
    for (;;) {
      auto comma = s.find(',', start);
      out.push_back(number(kw, s.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }
  ForestWitness witness(const Tok& kw, Attrs& a) {
    return {number(kw, attr(kw, a, "plus-components")), number(kw, attr(kw, a, "minus-components"))};
  }

  std::vector<Certificate> child_nodes() {
    std::vector<Certificate> out;
    while (peek().text == "(") out.push_back(node());
    return out;
  }

  Certificate node() {
    auto [kw, a] = head();
    Certificate c;
    const std::string& k = kw->text;
    if (k == "base") {
      c.node = cert::Base{number(*kw, attr(*kw, a, "edges"))};
    } else if (k == "bdry-red") {
      c.node = cert::BoundaryReduction{number(*kw, attr(*kw, a, "edge")), attr(*kw, a, "outer")};
    } else if (k == "free-dec") {
      c.node = cert::FreeDecomposition{edges(*kw, attr(*kw, a, "left")), edges(*kw, attr(*kw, a, "right")),
                                       attr(*kw, a, "shared")};
    } else if (k == "prime-wt") {
      c.node = cert::PrimeWeightTest{edges(*kw, attr(*kw, a, "flipped")), witness(*kw, a)};
    } else if (k == "complete-set") {
      cert::CompleteSet n;
      n.flipped = edges(*kw, attr(*kw, a, "flipped"));
      n.witness = witness(*kw, a);
      done(a);
      while (peek().text == "(") {
        auto [sk, sa] = head();
        if (sk->text == "step") {
          n.chain.push_back({edges(*sk, attr(*sk, sa, "sublot")), attr(*sk, sa, "vertex")});
          done(sa);
        } else if (sk->text == "sublot") {
          n.sublots.push_back(edges(*sk, attr(*sk, sa, "edges")));
          done(sa);
          auto kids = child_nodes();
          c.children.insert(c.children.end(), kids.begin(), kids.end());
        } else {
          fail(*sk, "expected 'step' or 'sublot' inside complete-set");
        }
        close();
      }
      c.node = std::move(n);
      close();
      return c;
    } else {
      fail(*kw, "unknown certificate node '" + k + "'");
    }
    done(a);
    c.children = child_nodes();
    close();
    return c;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_text(const Certificate& cert, std::string_view lot_name) {
  std::ostringstream out;
  out << "# lotva certificate";
  if (!lot_name.empty()) out << " for " << lot_name;
  out << '\n';
  emit(out, cert, 0);
  out << '\n';
  return out.str();
}

Certificate parse_certificate(std::string_view text) { return Parser(lex(text)).document(); }

}  // namespace lotva
