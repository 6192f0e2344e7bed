#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "egr/certify.hpp"
#include "egr/eopt.hpp"
#include "egr/error.hpp"
#include "egr/extract.hpp"
#include "egr/graph.hpp"
#include "egr/render.hpp"
#include "egr/result_io.hpp"
#include "json.hpp"

namespace {

struct CommonOpts {
  std::string family;
  int n = 0, p = 0, q = 0;
  std::string graph_path;

  std::string phi_path;
  double phi_uniform = -1.0;
  std::vector<double> phi_list;

  double tol = 1e-8;
  double mu0 = 1.0;
  int max_outer = 60;

  std::string out_path;
  std::string svg_path;
  int dims = 2;
  unsigned seed = 0;  // reserved for randomized tooling; solves are deterministic
};

void add_graph_source(CLI::App* cmd, CommonOpts& o) {
  auto* family = cmd->add_option("--family", o.family, "generator family name");
  auto* graph = cmd->add_option("--graph", o.graph_path, "graph JSON file");
  family->excludes(graph);
  graph->excludes(family);
  cmd->add_option("--n", o.n, "vertex-count parameter for sized families");
  cmd->add_option("--p", o.p, "grid rows");
  cmd->add_option("--q", o.q, "grid columns");
}

void add_phi_options(CLI::App* cmd, CommonOpts& o) {
  auto* path = cmd->add_option("--phi", o.phi_path, "squared edge lengths, JSON file");
  auto* uni = cmd->add_option("--phi-uniform", o.phi_uniform, "uniform squared edge length");
  auto* list = cmd->add_option("--phi-list", o.phi_list, "squared edge lengths, comma separated")
                   ->delimiter(',');
  path->excludes(uni)->excludes(list);
  uni->excludes(path)->excludes(list);
  list->excludes(path)->excludes(uni);
}

egr::Graph build_graph(const CommonOpts& o) {
  if (o.family.empty() == o.graph_path.empty())
    throw egr::Error(egr::Errc::BadParam, "need exactly one of --family or --graph");
  if (!o.family.empty()) return egr::generate(o.family, o.n, o.p, o.q);
  std::vector<std::string> warnings;
  egr::Graph g = egr::load_graph_json(o.graph_path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << o.graph_path << ": " << w << "\n";
  return g;
}

std::vector<double> load_array(const std::string& path, const char* key) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(egr::read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw egr::Error(egr::Errc::IoError, path + ": " + e.what());
  }
  if (j.is_object() && j.contains(key)) j = j[key];
  if (!j.is_array()) throw egr::Error(egr::Errc::IoError, path + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw egr::Error(egr::Errc::IoError, path + ": non-numeric entry");
    out.push_back(v.get<double>());
  }
  return out;
}

egr::Matrix load_coords(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(egr::read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw egr::Error(egr::Errc::IoError, path + ": " + e.what());
  }
  if (j.is_object() && j.contains("X")) j = j["X"];
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw egr::Error(egr::Errc::IoError, path + ": expected an array of coordinate rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  egr::Matrix x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw egr::Error(egr::Errc::IoError, path + ": ragged coordinate rows");
    for (int c = 0; c < cols; ++c) x(i, c) = j[i][c].get<double>();
  }
  return x;
}

egr::LengthSpec resolve_phi(const CommonOpts& o, const egr::Graph& g) {
  if (!o.phi_path.empty()) {
    std::vector<double> v = load_array(o.phi_path, "phi");
    if (static_cast<int>(v.size()) != g.m())
      throw egr::Error(egr::Errc::LengthMismatch, "phi file entries do not match edge count");
    for (double x : v)
      if (!(x >= 0)) throw egr::Error(egr::Errc::NegativePhi, "phi file");
    return egr::LengthSpec{std::move(v)};
  }
  if (!o.phi_list.empty()) {
    if (static_cast<int>(o.phi_list.size()) != g.m())
      throw egr::Error(egr::Errc::LengthMismatch, "--phi-list entries do not match edge count");
    for (double x : o.phi_list)
      if (!(x >= 0)) throw egr::Error(egr::Errc::NegativePhi, "--phi-list");
    return egr::LengthSpec{o.phi_list};
  }
  if (o.phi_uniform >= 0) return egr::LengthSpec{std::vector<double>(g.m(), o.phi_uniform)};
  return g.phi();
}

int run_solve(const CommonOpts& o, egr::Sense sense) {
  egr::Graph g = build_graph(o);
  egr::LengthSpec phi = resolve_phi(o, g);

  egr::SolverOptions opts;
  opts.tol_gap = o.tol;
  opts.mu0 = o.mu0;
  opts.max_outer = o.max_outer;

  egr::OptResult result = sense == egr::Sense::max_lambda2 ? egr::solve_max_lambda2(g, phi, opts)
                                                           : egr::solve_min_lambdan(g, phi, opts);
  egr::Realization realization = egr::extract_realization(g, phi, result);
  egr::CertificateReport cert =
      sense == egr::Sense::max_lambda2
          ? egr::check_max_certificate(realization.x, result.w_star, g, phi)
          : egr::check_min_certificate(realization.x, result.w_star, g, phi);

  if (!o.out_path.empty())
    egr::write_text_file(o.out_path, egr::result_to_json(result, realization, cert));
  if (!o.svg_path.empty())
    egr::render_svg(realization.x, &result.w_star.w, g, o.svg_path, o.dims);

  std::printf("lambda_star      %s\n", egr::format_double(result.lambda_star).c_str());
  std::printf("dimension        %d\n", realization.x.cols());
  std::printf("total_variance   %s\n", egr::format_double(realization.total_variance()).c_str());
  std::printf("certificate      %s\n", cert.overall ? "pass" : "FAIL");
  return cert.overall ? 0 : 2;
}

int run_certify(const std::string& graph_path, const std::string& weights_path,
                const std::string& coords_path, const std::string& sense_name,
                const std::string& out_path) {
  std::vector<std::string> warnings;
  egr::Graph g = egr::load_graph_json(graph_path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << graph_path << ": " << w << "\n";

  egr::WeightVector w{load_array(weights_path, "w")};
  egr::Matrix x = load_coords(coords_path);

  egr::CertificateReport rep = sense_name == "min"
                                   ? egr::check_min_certificate(x, w, g, g.phi())
                                   : egr::check_max_certificate(x, w, g, g.phi());
  const std::string json = egr::certificate_to_json(rep) + "\n";
  std::fputs(json.c_str(), stdout);
  if (!out_path.empty()) egr::write_text_file(out_path, json);
  return rep.overall ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extremal edge-length-constrained graph realizations via Laplacian eigenvalue "
               "optimization"};
  app.require_subcommand(1);

  CommonOpts max_opts, min_opts;
  auto add_solver = [](CLI::App* cmd, CommonOpts& o) {
    add_graph_source(cmd, o);
    add_phi_options(cmd, o);
    cmd->add_option("--tol", o.tol, "duality-gap tolerance");
    cmd->add_option("--mu0", o.mu0, "initial barrier parameter");
    cmd->add_option("--max-outer", o.max_outer, "outer iteration cap");
    cmd->add_option("--out", o.out_path, "result JSON path");
    cmd->add_option("--svg", o.svg_path, "figure SVG path");
    cmd->add_option("--dims", o.dims, "drawing dimensions")->check(CLI::IsMember({2, 3}));
    cmd->add_option("--seed", o.seed, "seed for randomized tooling (unused by solves)");
  };
  CLI::App* solve_max = app.add_subcommand("solve-max", "maximize the first nontrivial eigenvalue");
  add_solver(solve_max, max_opts);
  CLI::App* solve_min = app.add_subcommand("solve-min", "minimize the largest eigenvalue");
  add_solver(solve_min, min_opts);

  std::string c_graph, c_weights, c_coords, c_sense = "max", c_out;
  CLI::App* certify = app.add_subcommand("certify", "check an optimality certificate");
  certify->add_option("--graph", c_graph, "graph JSON file")->required();
  certify->add_option("--weights", c_weights, "weights JSON file")->required();
  certify->add_option("--coords", c_coords, "coordinate JSON file")->required();
  certify->add_option("--sense", c_sense, "max or min")->check(CLI::IsMember({"max", "min"}));
  certify->add_option("--out", c_out, "report JSON path");

  std::string r_graph, r_weights, r_coords, r_svg;
  int r_dims = 2;
  CLI::App* render = app.add_subcommand("render", "draw a realization to SVG");
  render->add_option("--graph", r_graph, "graph JSON file")->required();
  render->add_option("--coords", r_coords, "coordinate JSON file")->required();
  render->add_option("--weights", r_weights, "weights JSON file");
  render->add_option("--svg", r_svg, "output SVG path")->required();
  render->add_option("--dims", r_dims, "drawing dimensions")->check(CLI::IsMember({2, 3}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_max->parsed()) return run_solve(max_opts, egr::Sense::max_lambda2);
    if (solve_min->parsed()) return run_solve(min_opts, egr::Sense::min_lambdan);
    if (certify->parsed()) return run_certify(c_graph, c_weights, c_coords, c_sense, c_out);
    if (render->parsed()) {
      std::vector<std::string> warnings;
      egr::Graph g = egr::load_graph_json(r_graph, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << r_graph << ": " << w << "\n";
      egr::Matrix x = load_coords(r_coords);
      std::optional<std::vector<double>> w;
      if (!r_weights.empty()) w = load_array(r_weights, "w");
      egr::render_svg(x, w ? &*w : nullptr, g, r_svg, r_dims);
      return 0;
    }
  } catch (const egr::SolveFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const egr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
