#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lotva/certify.hpp"
#include "lotva/complex.hpp"
#include "lotva/diagrams.hpp"
#include "lotva/error.hpp"
#include "lotva/linkage.hpp"
#include "lotva/lot.hpp"
#include "lotva/weights.hpp"

namespace lotva::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Files are parsed with their path prefixed to any error.
template <class F>
auto parse_file(const std::string& path, F&& parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InvalidInput(path + ":" + e.what());
  }
}

Lot load_lot(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return parse_lot(t); });
}

bool looks_like_complex(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    if (!(ls >> word) || word.starts_with('#')) continue;
    return word == "complex" || word == "cell";
  }
  return false;
}

// A complex file, or a LOT file standing for its LOT complex.
TwoComplex load_complex(const std::string& path) {
  return parse_file(path, [](const std::string& t) {
    return looks_like_complex(t) ? parse_complex(t) : build_complex(parse_lot(t));
  });
}

std::string edge_text(const Lot& lot, EdgeId e) {
  const auto& ed = lot.edge(e);
  return lot.vertex_name(ed.tail) + "->" + lot.vertex_name(ed.head) + ":" + lot.vertex_name(ed.label);
}

std::string ids(const EdgeSet& s) {
  if (s.empty()) return "-";
  std::string out;
  for (EdgeId e : s) out += (out.empty() ? "" : ",") + std::to_string(e);
  return out;
}

std::string described(const Lot& lot, const EdgeSet& s) {
  std::string out = ids(s) + " (";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + edge_text(lot, s[i]);
  return out + ")";
}

EdgeSet parse_edge_list(const std::string& text) {
  EdgeSet out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad sub-LOT edge list '" + text + "': expected comma-separated edge ids");
    out.push_back(std::stoul(item));
  }
  if (out.empty()) throw InvalidInput("empty sub-LOT edge list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SubLot> parse_edge_lists(const Lot& lot, const std::vector<std::string>& specs) {
  std::vector<SubLot> out;
  for (const auto& s : specs) {
    SubLot sub{parse_edge_list(s)};
    if (!is_sublot(lot, sub)) throw InvalidInput("edges " + ids(sub.edges) + " do not form a sub-LOT");
    out.push_back(std::move(sub));
  }
  return out;
}

const char* yes(bool b) { return b ? "yes" : "no"; }

std::string class_text(CornerClass c) {
  switch (c) {
    case CornerClass::plus_plus: return "(++)";
    case CornerClass::minus_minus: return "(--)";
    case CornerClass::plus_minus: return "(+-)";
  }
  return "?";
}

void print_forest(std::ostream& out, const char* label, const TwoComplex& cx, const LinkGraph& g,
                  const ForestResult& r) {
  out << label << ": " << (r.is_forest ? "forest" : "not a forest");
  if (r.witness) out << ", cycle " << format_cycle(cx, g, *r.witness);
  out << '\n';
}

void print_violation(std::ostream& out, const TwoComplex& cx, const LinkGraph& g, const Verdict& v) {
  if (v.pass) {
    out << "weight test: PASS\n";
    return;
  }
  const auto& x = *v.violation;
  out << "weight test: FAIL\n";
  if (x.kind == Violation::Kind::cell) {
    const auto& cell = cx.cell(*x.cell);
    out << "cell " << cell.name << " has corner sum " << format_rational(x.weight) << " > "
        << static_cast<long>(cell.boundary.size()) - 2 << '\n';
  } else {
    out << "cycle of weight " << format_rational(x.weight) << ": " << format_cycle(cx, g, x.cycle) << '\n';
  }
}

// ------------------------------------------------------------- commands

int cmd_analyze(const std::string& path, std::ostream& out) {
  Lot lot = load_lot(path);
  auto props = check_properties(lot);
  out << "lot " << (lot.name().empty() ? path : lot.name()) << ": " << lot.vertex_count() << " vertices, "
      << lot.edge_count() << " edges\n";
  for (const auto& e : lot.edges()) out << "  edge " << e.id << ": " << edge_text(lot, e.id) << '\n';
  out << "injective: " << yes(props.injective) << '\n';
  out << "compressed: " << yes(props.compressed) << '\n';
  out << "boundary-reduced: " << yes(!props.boundary_reducible);
  if (props.boundary_reducible)
    out << " (leaf " << lot.vertex_name(props.boundary_reducible->outer) << " on edge "
        << props.boundary_reducible->edge << " is no label)";
  out << '\n';
  out << "reduced: " << yes(props.reduced) << '\n';
  out << "prime: " << yes(props.prime);
  if (props.proper_sublot_witness) out << " (proper sub-LOT " << described(lot, props.proper_sublot_witness->edges) << ")";
  out << '\n';

  auto subs = enumerate_sublots(lot);
  out << "maximal proper sub-LOTs:";
  if (subs.maximal_proper.empty()) out << " none";
  for (const auto& s : subs.maximal_proper) out << "\n  " << described(lot, s.edges);
  out << '\n';

  if (auto fd = free_decomposition(lot))
    out << "free decomposition: at " << lot.vertex_name(fd->shared) << ", left " << described(lot, fd->left)
        << ", right " << described(lot, fd->right) << '\n';
  else
    out << "free decomposition: none\n";

  if (props.injective && props.compressed && !props.prime) {
    if (auto set = complete_set_search(lot)) {
      out << "complete set:";
      for (const auto& s : set->sublots) out << ' ' << ids(s.edges);
      out << " -> prime quotient with " << set->chain.final_quotient.edge_count() << " edge(s)\n";
    } else {
      out << "complete set: none\n";
    }
  }
  return exit_pass;
}

int cmd_links(const std::string& path, bool dot, const std::vector<std::string>& relative, std::ostream& out) {
  Lot lot = load_lot(path);
  TwoComplex cx = build_complex(lot);
  if (relative.empty()) {
    LinkGraph g = build_link(cx);
    if (dot) {
      out << to_dot(cx, g);
      return exit_pass;
    }
    out << "link of " << lot.name() << ": " << g.nodes.size() << " nodes, " << g.corners.size() << " corners\n";
    for (const auto& c : g.corners)
      out << "  corner " << c.id << " " << corner_label(cx, c) << ": " << node_name(cx, c.first) << " -- "
          << node_name(cx, c.second) << ' ' << class_text(c.corner_class()) << '\n';
    auto [plus, minus] = signed_sublinks(g);
    print_forest(out, "lk+", cx, plus, relative_forest_check(plus, {}));
    print_forest(out, "lk-", cx, minus, relative_forest_check(minus, {}));
    return exit_pass;
  }

  auto sublots = parse_edge_lists(lot, relative);
  SubcomplexFamily fam = derive_subcomplexes(lot, sublots);
  LinkGraph g = build_relative_link(cx, fam);
  if (dot) {
    out << to_dot(cx, g);
    return exit_pass;
  }
  out << "relative link of " << lot.name() << ": " << g.nodes.size() << " nodes, " << g.non_delta_count()
      << " corners outside Delta, " << g.corners.size() - g.non_delta_count() << " Delta corners\n";
  for (const auto& c : g.corners)
    out << "  corner " << c.id << " " << corner_label(cx, c) << ": " << node_name(cx, c.first) << " -- "
        << node_name(cx, c.second) << ' ' << class_text(c.corner_class()) << '\n';
  for (Polarity p : {Polarity::plus, Polarity::minus}) {
    LinkGraph sub = polarity_subgraph(g, p);
    auto blocks = delta_blocks(g, p);
    print_forest(out, p == Polarity::plus ? "lk+ rel Delta+" : "lk- rel Delta-", cx, sub,
                 relative_forest_check(sub, blocks));
  }
  return exit_pass;
}

int cmd_weight_test(const std::string& path, const std::vector<std::string>& relative, const std::string& weights,
                    std::ostream& out) {
  if (relative.empty()) {
    TwoComplex cx = load_complex(path);
    LinkGraph g = build_link(cx);
    WeightAssignment w = weights.empty() ? canonical_weights(g) : parse_file(weights, [&](const std::string& t) {
      return parse_weights(t, cx, g);
    });
    Verdict v = weight_test(cx, g, w);
    print_violation(out, cx, g, v);
    return v.pass ? exit_pass : exit_negative;
  }
  Lot lot = load_lot(path);
  TwoComplex cx = build_complex(lot);
  auto sublots = parse_edge_lists(lot, relative);
  SubcomplexFamily fam = derive_subcomplexes(lot, sublots);
  LinkGraph g = build_relative_link(cx, fam);
  WeightAssignment w = weights.empty() ? canonical_weights(g) : parse_file(weights, [&](const std::string& t) {
    return parse_weights(t, cx, g);
  });
  Verdict v = relative_weight_test(cx, fam, w);
  out << "relative to";
  for (const auto& s : sublots) out << ' ' << ids(s.edges);
  out << '\n';
  print_violation(out, cx, g, v);
  return v.pass ? exit_pass : exit_negative;
}

int cmd_orient_search(const std::string& path, const std::vector<std::string>& fix, std::ostream& out) {
  Lot lot = load_lot(path);
  auto fixed = parse_edge_lists(lot, fix);
  auto flipped = orientation_search(lot, fixed);
  if (!flipped) {
    out << "no orientation found\n";
    return exit_negative;
  }
  out << "flipped: " << ids(*flipped) << '\n';
  auto f = signed_forests(reorient(lot, *flipped), fixed);
  out << "lk+ components: " << f.plus.components << ", lk- components: " << f.minus.components << '\n';
  return exit_pass;
}

int cmd_certify(const std::string& path, const std::string& out_path, std::ostream& out, std::ostream& err) {
  Lot lot = load_lot(path);
  auto result = certify_va(lot);
  if (!result) {
    const auto& f = *result.failure;
    err << "no certificate found (stage " << f.stage << "): " << f.message << "\n" << f.lot;
    return exit_negative;
  }
  std::string text = to_text(*result.certificate, lot.name());
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(out_path);
    if (!(file << text)) throw InvalidInput("cannot write '" + out_path + "'");
    out << "certificate with " << result.certificate->size() << " node(s) written to " << out_path << '\n';
  }
  return exit_pass;
}

int cmd_verify(const std::string& lot_path, const std::string& cert_path, std::ostream& out) {
  Lot lot = load_lot(lot_path);
  Certificate cert = parse_file(cert_path, [](const std::string& t) { return parse_certificate(t); });
  auto v = verify_certificate(lot, cert);
  if (v.accepted) {
    out << "accepted (" << cert.size() << " node(s))\n";
    return exit_pass;
  }
  out << "rejected at " << v.path << ": check " << v.check << " failed: " << v.message << '\n';
  return exit_negative;
}

int cmd_diagram_check(const std::string& path, const std::string& complex_path, std::ostream& out) {
  TwoComplex cx = load_complex(complex_path);
  SurfaceDiagram d = parse_file(path, [&](const std::string& t) { return parse_diagram(t, cx); });
  auto report = validate_diagram(d, cx);
  if (!report.valid) {
    out << "invalid: " << report.message << '\n';
    return exit_negative;
  }
  out << "valid: V=" << d.vertices.size() << " E=" << d.edges.size() << " F=" << d.faces.size()
      << " chi=" << report.chi << " genus=" << report.genus << (report.sphere ? " (sphere)" : "") << '\n';
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    auto z = vertex_link_cycle(d, v, cx);
    LinkGraph g = build_link(cx);
    out << "  z(" << d.vertices[v] << ") = " << format_cycle(cx, g, z.corners) << '\n';
  }
  auto folds = find_folding_vertices(d, cx);
  out << "folding vertices:";
  if (folds.empty()) out << " none";
  for (const auto& f : folds)
    out << ' ' << d.vertices[f.vertex] << '(' << d.faces[f.face_a].name << ',' << d.faces[f.face_b].name << ')';
  out << '\n';
  try {
    auto ss = find_sink_source(d, cx);
    out << "sink: " << d.vertices[ss.sink] << ", source: " << d.vertices[ss.source] << '\n';
  } catch (const SinkSourceError& e) {
    out << "sink/source: not available (" << e.what() << ")\n";
  }
  return exit_pass;
}

int cmd_diagram_double(const std::string& complex_path, const std::string& cell, std::ostream& out) {
  TwoComplex cx = load_complex(complex_path);
  auto c = cx.find_cell(cell);
  if (!c) throw InvalidInput("no cell named '" + cell + "'");
  out << to_text(double_cell_sphere(cx, *c), cx);
  return exit_pass;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lotva: vertex asphericity tools for labeled oriented trees", "lotva"};
  app.require_subcommand(1);

  std::string lot_path, second_path, out_path, weights_path, complex_path, cell_name;
  std::vector<std::string> relative, fix;
  bool dot = false;

  auto* analyze = app.add_subcommand("analyze", "structural properties of a LOT");
  analyze->add_option("lot", lot_path, "LOT file")->required();

  auto* links = app.add_subcommand("links", "vertex link of the LOT complex");
  links->add_option("lot", lot_path, "LOT file")->required();
  links->add_flag("--dot", dot, "emit Graphviz DOT");
  links->add_option("--relative", relative, "sub-LOT as comma-separated edge ids (repeatable)");

  auto* wt = app.add_subcommand("weight-test", "weight test with canonical or given weights");
  wt->add_option("input", lot_path, "LOT or complex file")->required();
  wt->add_option("--relative", relative, "sub-LOT as comma-separated edge ids (repeatable)");
  wt->add_option("--weights", weights_path, "weight file");

  auto* orient = app.add_subcommand("orient-search", "search a reorientation giving (relative) forests");
  orient->add_option("lot", lot_path, "LOT file")->required();
  orient->add_option("--fix", fix, "fixed sub-LOT as comma-separated edge ids (repeatable)");

  auto* certify = app.add_subcommand("certify", "produce a VA certificate");
  certify->add_option("lot", lot_path, "LOT file")->required();
  certify->add_option("--out", out_path, "write the certificate to this file");

  auto* verify = app.add_subcommand("verify-cert", "check a certificate against a LOT");
  verify->add_option("lot", lot_path, "LOT file")->required();
  verify->add_option("cert", second_path, "certificate file")->required();

  auto* diagram = app.add_subcommand("diagram", "surface diagrams");
  diagram->require_subcommand(1);
  auto* check = diagram->add_subcommand("check", "validate a diagram and report its vertex links");
  check->add_option("diagram", second_path, "diagram file")->required();
  check->add_option("--complex", complex_path, "complex or LOT file")->required();
  auto* dbl = diagram->add_subcommand("double", "the sphere made of a cell and its mirror");
  dbl->add_option("complex", complex_path, "complex or LOT file")->required();
  dbl->add_option("--cell", cell_name, "cell name")->required();

  std::vector<const char*> argv{"lotva"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_input;
  }

  try {
    if (*analyze) return cmd_analyze(lot_path, out);
    if (*links) return cmd_links(lot_path, dot, relative, out);
    if (*wt) return cmd_weight_test(lot_path, relative, weights_path, out);
    if (*orient) return cmd_orient_search(lot_path, fix, out);
    if (*certify) return cmd_certify(lot_path, out_path, out, err);
    if (*verify) return cmd_verify(lot_path, second_path, out);
    if (*check) return cmd_diagram_check(second_path, complex_path, out);
    if (*dbl) return cmd_diagram_double(complex_path, cell_name, out);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}

}  // namespace lotva::cli
