// Command-line front-end: channel capacity, the row-polytope pre-order,
// Birkhoff decomposition and finite-monoid convolution, over small JSON
// input files. Output is deterministic: fixed key order, floats printed
// with 12 significant digits, no timestamps.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochannel/stochannel.hpp"

namespace {

using nlohmann::json;
using namespace stochannel;

std::string fmt_num(double x) {
  if (x == 0.0) return "0";  // canonicalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string fmt_str(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fmt_vector(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_num(v[i]);
  }
  return out + "]";
}

std::string fmt_matrix(const std::vector<Dist>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ",";
    out += fmt_vector(rows[i].weights());
  }
  return out + "]";
}

std::string fmt_labels(const FiniteMonoid& s, const std::vector<std::size_t>& idx) {
  std::string out = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ",";
    out += fmt_str(s.label(idx[i]));
  }
  return out + "]";
}

std::string perm_string(const Permutation& pi) {
  std::string s;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi.size() > 10 && i) s += ",";
    s += std::to_string(pi(i));
  }
  return s;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

Channel load_channel(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("matrix") || !j["matrix"].is_array()) {
    throw std::runtime_error(path + ": expected {\"matrix\": [[...]]}");
  }
  std::vector<std::vector<double>> rows;
  for (const json& row : j["matrix"]) {
    if (!row.is_array()) throw std::runtime_error(path + ": matrix rows must be arrays");
    rows.push_back(row.get<std::vector<double>>());
  }
  return make_channel(rows);
}

struct MonoidFile {
  MonoidPtr monoid;
  std::map<std::string, std::vector<double>> measures;
};

MonoidFile load_monoid(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("elements") || !j.contains("table")) {
    throw std::runtime_error(path + ": expected {\"elements\": [...], \"table\": [[...]]}");
  }
  MonoidFile out;
  auto labels = j["elements"].get<std::vector<std::string>>();
  auto table = j["table"].get<std::vector<std::vector<std::size_t>>>();
  out.monoid = make_monoid(std::move(labels), table);
  if (j.contains("measures")) {
    for (const auto& [name, body] : j["measures"].items()) {
      if (!body.is_object() || !body.contains("weights")) {
        throw std::runtime_error(path + ": measure " + name + " needs {\"weights\": [...]}");
      }
      out.measures[name] = body["weights"].get<std::vector<double>>();
    }
  }
  return out;
}

ProbMeasure named_measure(const MonoidFile& mf, const std::string& name) {
  const auto it = mf.measures.find(name);
  if (it == mf.measures.end()) throw std::runtime_error("no measure named " + name);
  return ProbMeasure(mf.monoid, Dist(it->second));
}

double default_tol() {
  if (const char* env = std::getenv("STOCHANNEL_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw std::runtime_error("STOCHANNEL_TOL must be a positive number");
    }
    return v;
  }
  return 1e-9;
}

int run_capacity(const std::string& file, const std::string& method, std::optional<double> tol,
                 std::size_t max_iter, std::size_t resolution) {
  const Channel c = load_channel(file);
  double capacity = 0.0, lower = 0.0, upper = 0.0;
  std::size_t iterations = 0;
  Dist argmax = uniform_dist(c.input_count());
  if (method == "ba") {
    const CapacityResult r = blahut_arimoto(c, tol.value_or(default_tol()), max_iter);
    capacity = r.capacity;
    lower = r.lower_bound;
    upper = r.upper_bound;
    iterations = r.iterations;
    argmax = r.argmax_input;
  } else {
    const GridSearchResult r = capacity_grid_search(c, resolution);
    capacity = lower = upper = r.value;
    iterations = r.evaluations;
    argmax = r.argmax;
  }
  std::cout << "{\"capacity_bits\":" << fmt_num(capacity)
            << ",\"argmax_input\":" << fmt_vector(argmax.weights())
            << ",\"iterations\":" << iterations
            << ",\"lower_bound\":" << fmt_num(lower)
            << ",\"upper_bound\":" << fmt_num(upper)
            << ",\"method\":" << fmt_str(method) << "}\n";
  return 0;
}

int run_compare(const std::string& file_a, const std::string& file_b) {
  const Channel a = load_channel(file_a);
  const Channel b = load_channel(file_b);
  const double tol = default_tol();
  const bool leq_ab = leq_M(a, b);
  const bool leq_ba = leq_M(b, a);
  const bool same_shape =
      a.input_count() == b.input_count() && a.output_count() == b.output_count();
  const bool eq_rows = same_shape && equiv_M_rows(a, b);
  std::cout << "{\"leq_ab\":" << fmt_bool(leq_ab)
            << ",\"leq_ba\":" << fmt_bool(leq_ba)
            << ",\"equiv_polytope\":" << fmt_bool(leq_ab && leq_ba)
            << ",\"equiv_rows\":" << fmt_bool(eq_rows)
            << ",\"capacity_a\":" << fmt_num(blahut_arimoto(a, tol).capacity)
            << ",\"capacity_b\":" << fmt_num(blahut_arimoto(b, tol).capacity)
            << ",\"canonical_a\":" << fmt_matrix(canonical_form(a).generators())
            << ",\"canonical_b\":" << fmt_matrix(canonical_form(b).generators()) << "}\n";
  return 0;
}

int run_zsweep(std::size_t n, std::size_t k, std::size_t steps) {
  if (steps < 2) throw Error(ErrorKind::ParameterOutOfRange, "zsweep needs at least 2 steps");
  const double tol = default_tol();
  std::cout << "p,capacity_bits\n";
  for (std::size_t i = 0; i < steps; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(steps - 1);
    const CapacityResult r = blahut_arimoto(z_channel(n, k, p), tol);
    std::cout << fmt_num(p) << "," << fmt_num(r.capacity) << "\n";
  }
  return 0;
}

int run_birkhoff(const std::string& file) {
  const Channel d = load_channel(file);
  std::vector<BirkhoffTerm> terms = birkhoff_decompose(d);
  std::sort(terms.begin(), terms.end(), [](const BirkhoffTerm& x, const BirkhoffTerm& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    return perm_string(x.perm) < perm_string(y.perm);
  });
  std::string out = "[";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ",";
    out += "{\"weight\":" + fmt_num(terms[i].weight) +
           ",\"permutation\":" + fmt_str(perm_string(terms[i].perm)) + "}";
  }
  std::cout << out << "]\n";
  return 0;
}

int run_convolve(const std::string& file, const std::string& a, const std::string& b) {
  const MonoidFile mf = load_monoid(file);
  const ProbMeasure result = convolve(named_measure(mf, a), named_measure(mf, b));
  std::cout << "{\"weights\":" << fmt_vector(result.weights.weights()) << "}\n";
  return 0;
}

int run_monoid_info(const std::string& file) {
  const MonoidFile mf = load_monoid(file);
  const FiniteMonoid& s = *mf.monoid;
  const bool group = is_group(s);
  std::cout << "{\"size\":" << s.size()
            << ",\"is_group\":" << fmt_bool(group)
            << ",\"units\":" << fmt_labels(s, units(s))
            << ",\"minimal_ideal\":" << fmt_labels(s, minimal_ideal(s))
            << ",\"haar_if_group\":"
            << (group ? fmt_vector(haar(mf.monoid).weights.weights()) : "null") << "}\n";
  return 0;
}

int run_lift(const std::string& file, const std::string& measure) {
  const MonoidFile mf = load_monoid(file);
  const Channel c = measure_to_channel(named_measure(mf, measure));
  std::cout << "{\"matrix\":" << fmt_matrix(c.rows()) << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical channels: capacity, row-polytope order, finite-monoid convolution"};
  app.require_subcommand(1);

  std::string file, file_b, method = "ba", name_a, name_b, measure;
  std::optional<double> tol;
  std::size_t max_iter = 100000, resolution = 1000, n = 2, k = 0, steps = 2;

  CLI::App* cap = app.add_subcommand("capacity", "capacity of a channel file");
  cap->add_option("file", file, "channel JSON file")->required();
  cap->add_option("--method", method, "ba (iterative, certified) or grid (exhaustive oracle)")
      ->check(CLI::IsMember({"ba", "grid"}));
  cap->add_option("--tol", tol, "convergence gap for ba (default 1e-9 or STOCHANNEL_TOL)");
  cap->add_option("--max-iter", max_iter, "iteration budget for ba");
  cap->add_option("--resolution", resolution, "grid subdivisions per axis for grid");

  CLI::App* cmp = app.add_subcommand("compare", "order/equivalence/capacity of two channels");
  cmp->add_option("fileA", file, "first channel")->required();
  cmp->add_option("fileB", file_b, "second channel")->required();

  CLI::App* zs = app.add_subcommand(
      "zsweep", "capacity along p*I + (1-p)*O_k, p on a uniform grid (CSV)");
  zs->add_option("--n", n, "alphabet size")->required();
  zs->add_option("--k", k, "collapsed output index")->required();
  zs->add_option("--steps", steps, "number of grid points (>= 2)")->required();

  CLI::App* bk = app.add_subcommand("birkhoff",
                                    "decompose a doubly stochastic matrix into permutations");
  bk->add_option("file", file, "channel JSON file")->required();

  CLI::App* cv = app.add_subcommand("convolve", "convolve two named measures over a monoid");
  cv->add_option("monoid", file, "monoid JSON file")->required();
  cv->add_option("--a", name_a, "first measure name")->required();
  cv->add_option("--b", name_b, "second measure name")->required();

  CLI::App* mi = app.add_subcommand("monoid-info", "units, minimal ideal, Haar measure");
  mi->add_option("monoid", file, "monoid JSON file")->required();

  CLI::App* lf = app.add_subcommand("lift",
                                    "stochastic matrix of a measure on a transformation monoid");
  lf->add_option("monoid", file, "monoid JSON file")->required();
  lf->add_option("--measure", measure, "measure name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cap->parsed()) return run_capacity(file, method, tol, max_iter, resolution);
    if (cmp->parsed()) return run_compare(file, file_b);
    if (zs->parsed()) return run_zsweep(n, k, steps);
    if (bk->parsed()) return run_birkhoff(file);
    if (cv->parsed()) return run_convolve(file, name_a, name_b);
    if (mi->parsed()) return run_monoid_info(file);
    if (lf->parsed()) return run_lift(file, measure);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numeric_failure(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
