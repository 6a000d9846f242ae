#include "cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "padictree/builder.hpp"
#include "padictree/encoder.hpp"
#include "padictree/errors.hpp"
#include "padictree/hidden.hpp"
#include "padictree/moduli.hpp"
#include "padictree/tree_io.hpp"

namespace padictree::cli {

namespace {

using nlohmann::json;

struct FieldArgs {
  std::int64_t p = 0;  // 0: take the field from the input's p^m tags
  int m = 1;
  int precision = kDefaultPrecision;
};

struct Context {
  FieldArgs field;
  std::string output;
  std::string format;
  std::ostream* out = nullptr;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("unreadable_file", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Context& ctx, const std::string& text) {
  if (ctx.output.empty() || ctx.output == "-") {
    *ctx.out << text;
    return;
  }
  std::ofstream f(ctx.output, std::ios::binary);
  if (!f) throw InputError("unwritable_file", "cannot write " + ctx.output);
  f << text;
}

void emit(const Context& ctx, const json& j) { emit(ctx, j.dump(2) + "\n"); }

FieldPtr resolve_field(const FieldArgs& a, const std::string& contents) {
  if (a.p != 0) return FieldSpec::make(a.p, a.m, a.precision);
  const auto tag = sniff_field_tag(contents);
  if (!tag) throw InputError("field_unspecified", "pass --p or use p^m:... scalars in the input");
  return FieldSpec::make(tag->first, tag->second, a.precision);
}

std::vector<ProjPoint> read_points(const Context& ctx, const std::string& path) {
  const std::string text = read_file(path);
  return parse_points_file(text, resolve_field(ctx.field, text));
}

void emit_tree(const Context& ctx, const MarkedTree& t, json extra = json::object()) {
  if (ctx.format == "newick") {
    emit(ctx, to_newick(t) + "\n");
  } else if (ctx.format == "dot") {
    emit(ctx, to_dot(t));
  } else if (ctx.format == "json") {
    json j = to_json(t);
    for (auto& [k, v] : extra.items()) j[k] = v;
    emit(ctx, j);
  } else {
    throw InputError("unsupported_format", "trees are written as json, newick or dot, not " + ctx.format);
  }
}

json report_json(const HiddenReport& r) {
  return {{"format_version", kFormatVersion},
          {"n", r.n},
          {"v_h", r.v_h},
          {"e_h", r.e_h},
          {"t_h", r.t_h},
          {"b0_h", r.b0_h},
          {"chi", r.chi},
          {"bounds", {{"theorem", r.bounds.theorem}, {"corollary", r.bounds.corollary}, {"sharp", r.bounds.sharp}}}};
}

std::string summary_line(const HiddenReport& r) {
  auto yes = [](bool b) { return b ? "ok" : "VIOLATED"; };
  std::ostringstream s;
  s << "n=" << r.n << " v_h=" << r.v_h << " e_h=" << r.e_h << " t_h=" << r.t_h << " b0_h=" << r.b0_h
    << " chi=" << r.chi << " theorem=" << yes(r.bounds.theorem) << " corollary=" << yes(r.bounds.corollary)
    << " sharp=" << yes(r.bounds.sharp) << "\n";
  return s.str();
}

json mobius_json(const Mobius& m) {
  return {{"a", format_scalar(m.a())}, {"b", format_scalar(m.b())}, {"c", format_scalar(m.c())},
          {"d", format_scalar(m.d())}};
}

json points_json(const std::vector<ProjPoint>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(format_point(x));
  return a;
}

// Tree JSON, dendrogram JSON, or dendrogram Newick; the flag tells whether
// the result is a classical dendrogram.
std::pair<MarkedTree, bool> read_any_tree(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError("json_syntax", e.what());
    }
    if (j.contains("vertices")) return {tree_from_json(j), false};
    return {to_marked_tree(dendrogram_from_json(j)), true};
  }
  return {to_marked_tree(parse_dendrogram_newick(text)), true};
}

void write_error(std::ostream& err, ErrorKind kind, const std::string& reason, const std::string& message,
                 json extra = json::object()) {
  static const char* names[] = {"input", "precision", "field_too_small"};
  json j{{"format_version", kFormatVersion},
         {"kind", names[static_cast<int>(kind)]},
         {"reason", reason},
         {"message", message}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  err << j.dump() << "\n";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input:
      return kInputError;
    case ErrorKind::precision:
      return kPrecisionError;
    case ErrorKind::field_too_small:
      return kFieldTooSmall;
  }
  return kInputError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;
  CLI::App app{"p-adic dendrograms: build, encode, hidden-vertex bounds, M_{0,n} strata"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; keys are long option names, [section] per subcommand");
  app.add_option("--p", ctx.field.p, "residue characteristic (prime)");
  app.add_option("--m", ctx.field.m, "residue degree; the field is the unramified extension of degree m")
      ->check(CLI::PositiveNumber);
  app.add_option("--precision", ctx.field.precision, "digits kept for truncated results")
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output", ctx.output, "write the result here instead of stdout");

  std::function<void()> action;
  std::string path, path2;
  bool flag = false, flag2 = false;
  std::size_t n = 0, cap = kDefaultEnumerationCap, row = 0;
  bool row_given = false;
  const auto formats = CLI::IsMember({"json", "newick", "dot", "csv"});

  auto* tree = app.add_subcommand("tree", "points file -> projective dendrogram");
  tree->add_option("points", path, "one scalar per line")->required();
  tree->add_flag("--no-normalize", flag, "do not root the tree at the disk of the first three points");
  tree->add_option("--out", ctx.format, "json | newick | dot")->check(formats);
  tree->callback([&] {
    action = [&] {
      if (ctx.format.empty()) ctx.format = "json";
      BuildOptions opts;
      opts.normalize = !flag;
      emit_tree(ctx, build_projective_dendrogram(read_points(ctx, path), opts));
    };
  });

  auto* encode = app.add_subcommand("encode", "classical dendrogram (Newick or JSON) -> leaf codes");
  encode->add_option("dendrogram", path)->required();
  encode->add_flag("--auto-promote", flag, "raise m when the branching needs a larger residue field");
  encode->add_option("--out", ctx.format, "csv | json")->check(formats);
  encode->callback([&] {
    action = [&] {
      if (ctx.format.empty()) ctx.format = "csv";
      if (ctx.field.p == 0) throw InputError("field_unspecified", "encode needs --p");
      const std::string text = read_file(path);
      const auto first = text.find_first_not_of(" \t\r\n");
      const ClassicalDendrogram d = first != std::string::npos && text[first] == '{'
                                        ? dendrogram_from_json(json::parse(text))
                                        : parse_dendrogram_newick(text);
      const CodeAssignment c = encode_dendrogram(d, FieldSpec::make(ctx.field.p, ctx.field.m, ctx.field.precision),
                                                 EncodeOptions{flag});
      if (ctx.format == "csv") {
        emit(ctx, to_csv(c));
      } else if (ctx.format == "json") {
        json codes = json::array();
        for (const auto& [label, code] : c.codes) codes.push_back({{"label", label}, {"code", format_scalar(code)}});
        emit(ctx, json{{"format_version", kFormatVersion},
                       {"field", {{"p", c.field->p()}, {"m", c.field->m()}}},
                       {"codes", codes}});
      } else {
        throw InputError("unsupported_format", "codes are written as csv or json");
      }
    };
  });

  auto* decode = app.add_subcommand("decode", "leaf codes (CSV) -> classical dendrogram");
  decode->add_option("codes", path)->required();
  decode->add_option("--out", ctx.format, "newick | json | dot")->check(formats);
  decode->callback([&] {
    action = [&] {
      if (ctx.format.empty()) ctx.format = "newick";
      const std::string text = read_file(path);
      const ClassicalDendrogram d =
          decode_codes(parse_codes_csv(text, ctx.field.p ? resolve_field(ctx.field, text) : nullptr));
      if (ctx.format == "newick") {
        emit(ctx, to_newick(d) + "\n");
      } else if (ctx.format == "json") {
        emit(ctx, to_json(d));
      } else if (ctx.format == "dot") {
        emit(ctx, to_dot(to_marked_tree(d)));
      } else {
        throw InputError("unsupported_format", "dendrograms are written as newick, json or dot");
      }
    };
  });

  auto* hidden = app.add_subcommand("hidden", "hidden-vertex report of a tree");
  hidden->add_option("--n-from,--tree", path, "tree JSON, dendrogram JSON or dendrogram Newick")->required();
  hidden->add_flag("--classical", flag, "count the root as an end (default for dendrogram input)");
  hidden->callback([&] {
    action = [&] {
      const auto [t, classical] = read_any_tree(read_file(path));
      const HiddenReport r = hidden_report(t, classical || flag);
      emit(ctx, report_json(r));
      err << summary_line(r);
    };
  });

  auto* enumerate = app.add_subcommand("enumerate", "all tree shapes with n ends");
  enumerate->add_option("--n", n)->required()->check(CLI::Range(1, 64));
  enumerate->add_option("--cap", cap, "largest n allowed")->capture_default_str();
  enumerate->add_flag("--count-only", flag, "print the number of shapes only");
  enumerate->add_flag("--labeled", flag2, "labeled trees instead of unlabeled shapes");
  enumerate->callback([&] {
    action = [&] {
      if (flag) {
        emit(ctx, std::to_string(flag2 ? count_labeled_trees(n, cap) : enumerate_shapes(n, cap).size()) + "\n");
        return;
      }
      json shapes = json::array();
      if (flag2) {
        std::vector<std::string> forms;
        for_each_labeled_tree(
            n, [&](const MarkedTree& t) { forms.push_back(canonical_form(t, {false, true, false})); }, cap);
        std::sort(forms.begin(), forms.end());
        for (auto& s : forms) shapes.push_back(std::move(s));
      } else {
        for (const auto& t : enumerate_shapes(n, cap)) shapes.push_back(canonical_form(t, {false, false, false}));
      }
      emit(ctx, json{{"format_version", kFormatVersion},
                     {"n", n},
                     {"labeled", flag2},
                     {"count", shapes.size()},
                     {"shapes", shapes}});
    };
  });

  auto* extremal = app.add_subcommand("extremal", "tree attaining the sharp hidden-component bound");
  extremal->add_option("--n", n)->required()->check(CLI::Range(3, 100000));
  extremal->add_option("--out", ctx.format, "json | newick | dot")->check(formats);
  extremal->callback([&] {
    action = [&] {
      if (ctx.format.empty()) ctx.format = "json";
      const ExtremalTree e = extremal_dendrogram(n);
      emit_tree(ctx, e.tree, {{"degenerate", e.degenerate}, {"report", report_json(hidden_report(e.tree))}});
    };
  });

  auto* normalize_cmd = app.add_subcommand("normalize", "move the first three points to 0, 1, inf");
  normalize_cmd->add_option("points", path)->required();
  normalize_cmd->callback([&] {
    action = [&] {
      const auto [alpha, y] = normalize(Configuration{read_points(ctx, path), false});
      emit(ctx, json{{"format_version", kFormatVersion}, {"mobius", mobius_json(alpha)}, {"points", points_json(y.points)}});
    };
  });

  auto* stratum = app.add_subcommand("stratum", "labeled shape of a configuration");
  stratum->add_option("points", path)->required();
  stratum->callback([&] {
    action = [&] {
      const auto xs = read_points(ctx, path);
      const StratumCode c = stratum_code(Configuration{xs, false});
      json j{{"format_version", kFormatVersion}, {"n", xs.size()}, {"code", c.text}};
      if (xs.size() == 4) j["m04"] = m04_name(c);
      emit(ctx, j);
    };
  });

  auto* adjacent = app.add_subcommand("adjacent", "are two strata one edge contraction apart");
  adjacent->add_option("code_a", path, "stratum code")->required();
  adjacent->add_option("code_b", path2, "stratum code")->required();
  adjacent->callback([&] {
    action = [&] {
      emit(ctx, json{{"format_version", kFormatVersion},
                     {"adjacent", strata_adjacent(StratumCode{path}, StratumCode{path2})}});
    };
  });

  auto* slice_cmd = app.add_subcommand("slice", "family CSV -> dendrogram of each time slice");
  slice_cmd->add_option("family", path)->required();
  slice_cmd->add_option("--row", row, "only this row (0-based)")->each([&](const std::string&) { row_given = true; });
  slice_cmd->add_option("--out", ctx.format, "json | newick")->check(formats);
  slice_cmd->callback([&] {
    action = [&] {
      if (ctx.format.empty()) ctx.format = "json";
      const std::string text = read_file(path);
      const Family fam = parse_family_csv(text, ctx.field.p ? resolve_field(ctx.field, text) : nullptr);
      std::vector<Slice> slices;
      std::vector<std::size_t> rows;
      if (row_given) {
        slices.push_back(slice(fam, row));
        rows.push_back(row);
      } else {
        slices = slice_all(fam);
        for (std::size_t j = 0; j < slices.size(); ++j) rows.push_back(j);
      }
      if (ctx.format == "newick") {
        std::string s;
        for (std::size_t k = 0; k < slices.size(); ++k) s += fam.times[rows[k]] + "\t" + to_newick(slices[k].tree) + "\n";
        emit(ctx, s);
        return;
      }
      if (ctx.format != "json") throw InputError("unsupported_format", "slices are written as json or newick");
      json a = json::array();
      for (std::size_t k = 0; k < slices.size(); ++k) {
        const Slice& s = slices[k];
        json dups = json::array();
        for (const auto& [i, of] : s.duplicates) dups.push_back({{"column", i}, {"duplicate_of", of}});
        a.push_back({{"row", rows[k]},
                     {"time", fam.times[rows[k]]},
                     {"kept", s.kept},
                     {"duplicates", dups},
                     {"stratum", canonical_form(s.tree, {false, true, false})},
                     {"mobius", mobius_json(s.alpha)},
                     {"tree", to_json(s.tree)}});
      }
      emit(ctx, json{{"format_version", kFormatVersion}, {"slices", a}});
    };
  });

  auto* collide_cmd = app.add_subcommand("collide", "stable tree of a configuration with coincident points");
  collide_cmd->add_option("points", path)->required();
  collide_cmd->add_option("--out", ctx.format, "json | dot")->check(formats);
  collide_cmd->callback([&] {
    action = [&] {
      if (ctx.format.empty()) ctx.format = "json";
      const StableTree s = collide(read_points(ctx, path));
      if (ctx.format == "dot") {
        emit(ctx, to_dot(s));
      } else if (ctx.format == "json") {
        emit(ctx, to_json(s));
      } else {
        throw InputError("unsupported_format", "stable trees are written as json or dot");
      }
    };
  });

  auto* validate = app.add_subcommand("validate-stable", "check the stability properties of a stable tree JSON");
  validate->add_option("stable_tree", path)->required();
  validate->callback([&] {
    action = [&] {
      json j;
      try {
        j = json::parse(read_file(path));
      } catch (const json::parse_error& e) {
        throw InputError("json_syntax", e.what());
      }
      const auto violations = validate_stable(stable_tree_from_json(j));
      json v = json::array();
      for (const auto& x : violations) v.push_back({{"property", x.property}, {"detail", x.detail}});
      emit(ctx, json{{"format_version", kFormatVersion}, {"valid", violations.empty()}, {"violations", v}});
      if (!violations.empty()) throw InputError(violations.front().property, violations.front().detail);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, ErrorKind::input, "usage", e.what());
    return kInputError;
  }

  try {
    action();
    return kOk;
  } catch (const FieldTooSmallError& e) {
    write_error(err, e.kind(), e.reason(), e.what(),
                {{"required_branching", e.required_branching()}, {"suggested_m", e.suggested_degree()}});
    return kFieldTooSmall;
  } catch (const Error& e) {
    write_error(err, e.kind(), e.reason(), e.what());
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    write_error(err, ErrorKind::input, "json", e.what());
    return kInputError;
  }
}

}  // namespace padictree::cli
