#include "morse_concordance/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "morse_concordance/error.hpp"
#include "morse_concordance/fold_diagram.hpp"
#include "morse_concordance/invariants.hpp"
#include "morse_concordance/json_io.hpp"
#include "morse_concordance/mesh_ingest.hpp"
#include "morse_concordance/morse_data.hpp"
#include "morse_concordance/parallel.hpp"

namespace morse_concordance::cli {

namespace {

using nlohmann::json;

enum class Format { json, human };

// Result of one subcommand: the document to print and the exit code.
struct Outcome {
  json document;
  int exit_code = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("parse_error", path + ": " + e.what());
  }
}

MorseFunctionRecord read_record(const std::string& path) {
  return json_io::record_from_json(parse_json_file(path));
}

ConcordanceDiagram read_diagram(const std::string& path) {
  return json_io::diagram_from_json(parse_json_file(path));
}

json witness_json(const std::optional<InvariantWitness>& w) {
  if (!w) return nullptr;
  return w->component == "sigma" ? json("sigma") : json("phi");
}

json verdict_json(const ConcordanceVerdict& v) {
  json j;
  j["verdict"] = v.concordant ? "concordant" : "not_concordant";
  j["witness"] = witness_json(v.witness);
  if (v.witness) {
    j["witness_detail"] = {{"component", v.witness->component},
                           {"lambda", v.witness->lambda},
                           {"value0", v.witness->value0},
                           {"value1", v.witness->value1}};
  }
  j["class0"] = json_io::to_json(v.class0);
  j["class1"] = json_io::to_json(v.class1);
  j["notes"] = v.notes;
  return j;
}

Outcome cmd_invariants(const std::vector<std::string>& inputs) {
  const bool mesh = inputs.size() == 2 || std::filesystem::path(inputs.front()).extension() == ".scx";
  if (!mesh) {
    const MorseFunctionRecord r = read_record(inputs.front());
    const ValidationReport report = validate_record(r);
    json j;
    j["class"] = json_io::to_json(concordance_class(r.critical_vector));
    j["nu"] = json_io::to_json(r.critical_vector);
    j["validation"] = json_io::to_json(report);
    return {j, report.ok() ? 0 : 1};
  }
  if (inputs.size() != 2) throw Error("usage", "a mesh needs a field file: invariants <mesh.scx> <field>");
  const SimplicialComplex k = parse_complex(read_file(inputs[0]));
  const VertexField field = parse_field(read_file(inputs[1]), k.vertex_count);
  const CriticalExtraction e = critical_vector(k, field);
  json vertices = json::array();
  for (const auto& cv : e.critical_vertices) {
    json contributions = json::array();
    for (const auto& [index, count] : cv.contributions) contributions.push_back({{"index", index}, {"count", count}});
    vertices.push_back({{"vertex", cv.vertex}, {"contributions", contributions}});
  }
  const ValidationReport report = validate_vector(e.vector, k.n, e.euler_characteristic);
  json j;
  j["class"] = json_io::to_json(concordance_class(e.vector));
  j["nu"] = json_io::to_json(e.vector);
  j["euler_characteristic"] = e.euler_characteristic;
  j["connected"] = e.connected;
  j["critical_vertices"] = vertices;
  j["validation"] = json_io::to_json(report);
  return {j, report.ok() ? 0 : 1};
}

Outcome cmd_decide(const std::string& a, const std::string& b) {
  const MorseFunctionRecord r0 = read_record(a);
  const MorseFunctionRecord r1 = read_record(b);
  if (!(r0.manifold == r1.manifold)) {
    throw Error("manifold_mismatch", "both records must describe the same manifold");
  }
  return {verdict_json(decide_concordant(r0.manifold, r0.critical_vector, r1.critical_vector)), 0};
}

ManifoldDescriptor manifold(int dim, std::int64_t chi, bool nonorientable) {
  ManifoldDescriptor m;
  m.dimension = dim;
  m.euler_characteristic = chi;
  m.orientable = !nonorientable;
  return m;
}

Outcome cmd_witness(const ManifoldDescriptor& m) {
  const ValidationReport mr = validate_manifold(m);
  if (!mr.ok()) return {{{"error", "invalid_manifold"}, {"validation", json_io::to_json(mr)}}, 1};
  const WitnessPair w = witness_pair(m);
  json j;
  j["first"] = json_io::to_json(w.first);
  j["second"] = json_io::to_json(w.second);
  j["class_first"] = json_io::to_json(concordance_class(w.first));
  j["class_second"] = json_io::to_json(concordance_class(w.second));
  j["report"] = w.report;
  j["oriented_framing"] = w.oriented_framing;
  return {j, 0};
}

Outcome cmd_realize(const ManifoldDescriptor& m, const std::vector<std::int64_t>& phi_target,
                    std::optional<int> sigma_target) {
  const ValidationReport mr = validate_manifold(m);
  if (!mr.ok()) return {{{"error", "invalid_manifold"}, {"validation", json_io::to_json(mr)}}, 1};
  std::optional<Z2> s;
  if (sigma_target) s = Z2(*sigma_target);
  const Realization r = realize_vector(m, phi_target, s);
  json j;
  j["nu"] = json_io::to_json(r.vector);
  j["class"] = json_io::to_json(concordance_class(r.vector));
  j["notes"] = r.notes;
  return {j, 0};
}

Outcome cmd_validate(const std::string& path) {
  const ValidationReport report = validate_record(read_record(path));
  return {json_io::to_json(report), report.ok() ? 0 : 1};
}

Outcome cmd_diagram_validate(const std::string& path, const std::string& level) {
  const DiagramReport report =
      validate_diagram(read_diagram(path), level == "strict" ? ValidationLevel::strict : ValidationLevel::structural);
  json j = json_io::to_json(report);
  j["level"] = level;
  return {j, report.ok() ? 0 : 1};
}

Outcome cmd_diagram_verify(const std::string& path) {
  const ConcordanceDiagram d = read_diagram(path);
  const DiagramReport validity = validate_diagram(d, ValidationLevel::strict);
  if (!validity.ok()) {
    json j = {{"error", "invalid_diagram"}, {"validation", json_io::to_json(validity)}};
    return {j, 1};
  }
  const CongruenceReport report = verify_congruences(d);
  return {json_io::to_json(report), report.violations() == 0 ? 0 : 1};
}

Outcome cmd_diagram_eliminate(const std::string& path) {
  const ConcordanceDiagram d = read_diagram(path);
  const DiagramReport validity = validate_diagram(d, ValidationLevel::strict);
  if (!validity.ok()) {
    json j = {{"error", "invalid_diagram"}, {"validation", json_io::to_json(validity)}};
    return {j, 1};
  }
  const EliminationResult r = eliminate_all_cusps(d);
  json j;
  j["succeeded"] = r.succeeded();
  j["pairs_eliminated"] = r.pairs_eliminated;
  j["remaining_cusps"] = r.diagram.cusp_count();
  j["diagram"] = json_io::to_json(r.diagram);
  if (r.obstruction) {
    j["obstruction"] = {{"kind", r.obstruction->kind},
                        {"cusp_index", r.obstruction->cusp_index},
                        {"detail", r.obstruction->detail}};
  } else {
    j["obstruction"] = nullptr;
  }
  return {j, r.succeeded() ? 0 : 1};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct SampleOutcome {
  std::vector<std::string> violations;
  bool has_cusps = false;
  bool eliminated = false;
  std::string obstruction;
  std::int64_t congruences = 0;
};

// Diagram shape cycled across samples: cusp-free, index-k cusps only (odd n),
// any cusps, and any cusps with balanced polarity.
GeneratorOptions sample_options(int n, std::int64_t i) {
  GeneratorOptions o;
  switch (i % 4) {
    case 0: o.cusps = CuspMode::none; break;
    case 1: o.cusps = n % 2 == 1 ? CuspMode::middle_index : CuspMode::any; break;
    case 2: o.cusps = CuspMode::any; break;
    default: o.cusps = CuspMode::any; o.balanced = true; break;
  }
  return o;
}

SampleOutcome run_sample(int n, std::uint64_t seed, int budget, const GeneratorOptions& options) {
  SampleOutcome s;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) s.violations.push_back(what);
  };
  try {
    const ConcordanceDiagram d = random_diagram(n, seed, budget, options);
    const auto [bottom, top] = boundary_data(d);
    const ConcordanceClass c0 = concordance_class(bottom);
    const ConcordanceClass c1 = concordance_class(top);
    s.has_cusps = d.cusp_count() > 0;

    const CongruenceReport report = verify_congruences(d);
    for (const Congruence& c : report.congruences) {
      if (!c.applies) continue;
      ++s.congruences;
      check(c.holds, "congruence " + c.name + " fails: " + c.statement);
    }
    if (n % 2 == 1 && options.cusps != CuspMode::any) {
      const auto lhs = static_cast<std::int64_t>(d.cusp_count() % 2);
      check(lhs == (*c0.sigma + *c1.sigma).value(), "cusp count parity differs from sigma(f0) + sigma(f1)");
    }
    if (!s.has_cusps) check(c0 == c1, "cusp-free diagram joins different concordance classes");

    const EliminationResult r = eliminate_all_cusps(d);
    s.eliminated = r.succeeded();
    check(r.succeeded() == (c0 == c1), "elimination outcome disagrees with the invariants");
    if (r.succeeded()) {
      check(r.diagram.cusp_count() == 0, "elimination left cusps");
      check(boundary_data(r.diagram) == boundary_data(d), "elimination changed the boundary data");
      check(validate_diagram(r.diagram, ValidationLevel::strict).ok(), "eliminated diagram is not strictly valid");
    } else {
      s.obstruction = r.obstruction->kind;
      const std::string expected = c0.phi != c1.phi ? "phi" : "cusp_parity";
      check(r.obstruction->kind == expected, "obstruction " + r.obstruction->kind + ", expected " + expected);
    }
  } catch (const std::exception& e) {
    s.violations.push_back(std::string("exception: ") + e.what());
  }
  return s;
}

// Renders a JSON document as indented "key: value" lines.
void render_human(const json& j, std::ostream& out, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_structured() && !value.empty() && !(value.is_array() && !value.front().is_structured())) {
        out << pad << key << ":\n";
        render_human(value, out, depth + 1);
      } else {
        out << pad << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
      }
    }
  } else if (j.is_array()) {
    for (const auto& value : j) {
      if (value.is_structured()) {
        out << pad << "-\n";
        render_human(value, out, depth + 1);
      } else {
        out << pad << "- " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
      }
    }
  } else {
    out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

void emit(const json& j, Format format, std::ostream& out) {
  if (format == Format::json) {
    out << j.dump(2) << '\n';
  } else {
    render_human(j, out);
  }
}

int emit_error(const std::string& code, const std::string& detail, int exit_code, Format format, std::ostream& out,
               std::ostream& err) {
  if (format == Format::json) {
    out << json{{"error", code}, {"detail", detail}}.dump(2) << '\n';
  } else {
    err << "error (" << code << "): " << detail << '\n';
  }
  return exit_code;
}

bool is_input_error(const std::string& code) {
  return code == "parse_error" || code == "io_error" || code == "usage";
}

}  // namespace

FuzzSummary fuzz_diagrams(int n, std::int64_t samples, std::uint64_t seed, int budget) {
  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for(outcomes.size(), [&](std::size_t i) {
    const auto index = static_cast<std::int64_t>(i);
    outcomes[i] = run_sample(n, splitmix64(seed + static_cast<std::uint64_t>(i)), budget, sample_options(n, index));
  });

  FuzzSummary summary;
  summary.samples = samples;
  std::int64_t with_cusps = 0, eliminated = 0, phi = 0, parity = 0, congruences = 0;
  json details = json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SampleOutcome& s = outcomes[i];
    with_cusps += s.has_cusps;
    eliminated += s.eliminated;
    phi += s.obstruction == "phi";
    parity += s.obstruction == "cusp_parity";
    congruences += s.congruences;
    summary.violations += static_cast<std::int64_t>(s.violations.size());
    for (const std::string& v : s.violations) {
      if (details.size() < 20) details.push_back({{"sample", i}, {"detail", v}});
    }
  }
  summary.document = {{"n", n},
                      {"samples", samples},
                      {"seed", seed},
                      {"budget", budget},
                      {"violations", summary.violations},
                      {"violation_details", details},
                      {"counts",
                       {{"with_cusps", with_cusps},
                        {"cusp_free", samples - with_cusps},
                        {"eliminated", eliminated},
                        {"obstructed_phi", phi},
                        {"obstructed_cusp_parity", parity},
                        {"congruences_checked", congruences}}}};
  return summary;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concordance invariants of Morse functions, fold diagrams and PL Morse data", "morsec"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format_name = "json";
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"json", "human"}));

  std::vector<std::string> inv_inputs;
  auto* inv = app.add_subcommand("invariants", "Concordance class of a record, or of a mesh with a vertex field");
  inv->add_option("inputs", inv_inputs, "record.json, or mesh.scx field.txt")->required()->expected(1, 2);

  std::string decide_a, decide_b;
  auto* dec = app.add_subcommand("decide", "Decide concordance of two records on the same manifold");
  dec->add_option("a", decide_a)->required();
  dec->add_option("b", decide_b)->required();

  int dim = 0;
  std::int64_t chi = 0;
  bool nonorientable = false;
  auto* wit = app.add_subcommand("witness", "Non-concordant pair with equal Phi (odd dimension)");
  wit->add_option("--dim", dim)->required();
  wit->add_option("--chi", chi)->required();
  wit->add_flag("--nonorientable", nonorientable);

  std::vector<std::int64_t> phi_target;
  int sigma_target = 0;
  auto* rea = app.add_subcommand("realize", "Critical vector with prescribed invariants");
  rea->add_option("--dim", dim)->required();
  rea->add_option("--chi", chi)->required();
  rea->add_option("--phi", phi_target, "Comma-separated Phi components")->delimiter(',');
  auto* sigma_opt = rea->add_option("--sigma", sigma_target)->check(CLI::IsMember({0, 1}));
  rea->add_flag("--nonorientable", nonorientable);

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Validate a Morse function record");
  val->add_option("record", validate_path)->required();

  auto* dia = app.add_subcommand("diagram", "Fold diagrams of concordances");
  dia->require_subcommand(1);
  std::string diagram_path, level = "strict";
  auto* dval = dia->add_subcommand("validate", "Check diagram rules");
  dval->add_option("diagram", diagram_path)->required();
  dval->add_option("--level", level)->check(CLI::IsMember({"structural", "strict"}));
  auto* dver = dia->add_subcommand("verify", "Evaluate the counting congruences");
  dver->add_option("diagram", diagram_path)->required();
  auto* delim = dia->add_subcommand("eliminate", "Eliminate cusps in matching pairs");
  delim->add_option("diagram", diagram_path)->required();
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  int budget = 4;
  auto* fuzz = dia->add_subcommand("fuzz", "Property suite over random diagrams");
  fuzz->add_option("--dim", dim)->required()->check(CLI::Range(2, 64));
  fuzz->add_option("--samples", samples)->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", seed);
  fuzz->add_option("--budget", budget)->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const Format f = format_name == "human" ? Format::human : Format::json;
    return emit_error("usage", e.what(), 2, f, out, err);
  }
  const Format format = format_name == "human" ? Format::human : Format::json;

  try {
    Outcome o;
    if (*inv) {
      o = cmd_invariants(inv_inputs);
    } else if (*dec) {
      o = cmd_decide(decide_a, decide_b);
    } else if (*wit) {
      o = cmd_witness(manifold(dim, chi, nonorientable));
    } else if (*rea) {
      std::optional<int> s;
      if (sigma_opt->count() > 0) s = sigma_target;
      o = cmd_realize(manifold(dim, chi, nonorientable), phi_target, s);
    } else if (*val) {
      o = cmd_validate(validate_path);
    } else if (*dval) {
      o = cmd_diagram_validate(diagram_path, level);
    } else if (*dver) {
      o = cmd_diagram_verify(diagram_path);
    } else if (*delim) {
      o = cmd_diagram_eliminate(diagram_path);
    } else if (*fuzz) {
      const FuzzSummary s = fuzz_diagrams(dim, samples, seed, budget);
      o = {s.document, s.violations == 0 ? 0 : 1};
    }
    emit(o.document, format, out);
    return o.exit_code;
  } catch (const InternalConsistencyError& e) {
    return emit_error(e.code(), e.what(), 1, format, out, err);
  } catch (const Error& e) {
    return emit_error(e.code(), e.what(), is_input_error(e.code()) ? 2 : 1, format, out, err);
  } catch (const std::exception& e) {
    return emit_error("internal", e.what(), 1, format, out, err);
  }
}

}  // namespace morse_concordance::cli
