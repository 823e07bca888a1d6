#include "pmsdr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pmsdr/csv.hpp"
#include "pmsdr/error.hpp"
#include "pmsdr/expression.hpp"
#include "pmsdr/kernel_pm.hpp"
#include "pmsdr/linear_pm.hpp"
#include "pmsdr/realtime_pm.hpp"
#include "pmsdr/serialize.hpp"
#include "pmsdr/simulate.hpp"

namespace pmsdr::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kModule = "cli";
constexpr const char* kCustomPrefix = "custom:";

std::string joined_loss_names() {
  std::string s;
  for (const auto& name : builtin_loss_names()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

std::string output_prefix(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  const char* dir = std::getenv("PMSDR_OUTPUT_DIR");
  return (fs::path(dir && *dir ? dir : ".") / cfg.command).string();
}

std::ofstream open_output(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream f(path);
  if (!f) throw InputError(kModule, "cannot write '" + path + "'");
  return f;
}

void write_json(const std::string& path, const json& doc) {
  auto f = open_output(path);
  f << doc.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError(kModule, "cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw InputError(kModule, "'" + path + "' is not valid JSON: " + e.what());
  }
}

CsvTable read_table(const std::string& path, std::istream& in) {
  if (path.empty()) throw InputError(kModule, "--input is required");
  return path == "-" ? read_csv(in) : read_csv_file(path);
}

SolveConfig solve_config(const RunConfig& cfg) {
  SolveConfig s;
  s.lambda = cfg.lambda;
  s.eta = cfg.eta;
  s.eps = cfg.eps;
  s.max_iter = cfg.max_iter;
  s.warm_start = cfg.warm_start;
  validate(s);
  return s;
}

std::vector<std::string> predictor_header(std::size_t d) {
  std::vector<std::string> h;
  for (std::size_t j = 1; j <= d; ++j) h.push_back("sp" + std::to_string(j));
  return h;
}

void write_predictors(const std::string& path, const Matrix& sp, std::span<const double> y) {
  Matrix table(sp.rows(), sp.cols() + 1);
  for (std::size_t i = 0; i < sp.rows(); ++i) {
    for (std::size_t j = 0; j < sp.cols(); ++j) table(i, j) = sp(i, j);
    table(i, sp.cols()) = y[i];
  }
  auto header = predictor_header(sp.cols());
  header.push_back("y");
  auto f = open_output(path);
  write_csv(f, header, table);
}

void print_vector(std::ostream& out, const char* label, std::span<const double> v) {
  out << label;
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, " %.7g", x);
    out << buf;
  }
  out << '\n';
}

json fit_document(const PmFit& fit, const char* kind, const RunConfig& cfg,
                  const std::vector<std::string>& columns, const std::string& response) {
  json doc = to_json(fit);
  doc["schema_version"] = kFitSchemaVersion;
  doc["kind"] = kind;
  doc["columns"] = columns;
  doc["response"] = response;
  if (fit.loss.family == LossFamily::Custom) doc["loss"] = cfg.loss;
  return doc;
}

// Picks the columns a fit was trained on out of a new table, by name.
Matrix select_columns(const CsvTable& table, const std::vector<std::string>& columns) {
  std::vector<std::size_t> idx;
  for (const auto& name : columns) {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
      throw InputError(kModule, "input is missing predictor column '" + name + "'");
    idx.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  Matrix x(table.values.rows(), idx.size());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) x(i, j) = table.values(i, idx[j]);
  return x;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::istream& in) {
  const Dataset data = split_response(read_table(cfg.input, in), cfg.response);
  const LossSpec loss = resolve_loss(cfg.loss, cfg.mtype);
  const PmFit fit = fit_linear(data.x, data.y, loss, cfg.h, solve_config(cfg));
  const std::string prefix = output_prefix(cfg);
  write_json(prefix + ".fit.json", fit_document(fit, "linear", cfg, data.predictors, data.response));
  const std::size_t d = std::min(cfg.d ? cfg.d : 1, fit.dim());
  write_predictors(prefix + ".predictors.csv", project(fit, data.x, d), data.y);
  print_vector(out, "evalues:", fit.evalues);
  return 0;
}

int cmd_fit_kernel(const RunConfig& cfg, std::ostream& out, std::istream& in) {
  const Dataset data = split_response(read_table(cfg.input, in), cfg.response);
  const LossSpec loss = resolve_loss(cfg.loss, cfg.mtype);
  const NpmFit fit = fit_kernel(data.x, data.y, loss, cfg.h, solve_config(cfg), cfg.b, cfg.gamma);
  const std::string prefix = output_prefix(cfg);
  json doc = fit_document(fit.inner, "kernel", cfg, data.predictors, data.response);
  doc["kernel"] = to_json(fit.basis);
  write_json(prefix + ".fit.json", doc);
  const std::size_t d = std::min(cfg.d ? cfg.d : 2, fit.basis.size());
  write_predictors(prefix + ".predictors.csv", project_nonlinear(fit, data.x, d), data.y);
  print_vector(out, "evalues:", fit.inner.evalues);
  return 0;
}

Vector parse_list(const std::string& s) {
  Vector v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InputError(kModule, "'" + item + "' is not a number");
    }
  }
  return v;
}

int cmd_bic(const RunConfig& cfg, std::ostream& out) {
  Vector evalues;
  std::size_t n = cfg.n;
  if (!cfg.fit.empty()) {
    const json doc = read_json(cfg.fit);
    try {
      evalues = doc.at("evalues").get<Vector>();
      if (n == 0) n = doc.at("n").get<std::size_t>();
    } catch (const json::exception& e) {
      throw InputError(kModule, std::string("fit file lacks evalues/n: ") + e.what());
    }
  } else if (!cfg.evalues.empty()) {
    evalues = parse_list(cfg.evalues);
  } else {
    throw InputError(kModule, "bic needs --fit or --evalues");
  }
  if (n == 0) throw InputError(kModule, "bic needs the sample size (--n)");
  const DimensionEstimate est = bic_dimension(evalues, n, cfg.rho, cfg.p_max);
  print_vector(out, "criterion:", est.criterion);
  out << "d_hat: " << est.d_hat << '\n';
  write_json(output_prefix(cfg) + ".bic.json",
             {{"schema_version", kFitSchemaVersion},
              {"criterion", est.criterion},
              {"d_hat", est.d_hat},
              {"rho", est.rho},
              {"n", n}});
  return 0;
}

json stream_fit_document(const StreamState& st, const std::vector<std::string>& columns,
                         const std::string& response) {
  const StreamResult res = stream_result(st);
  PmFit fit;
  fit.evalues = res.evalues;
  fit.evectors = res.evectors;
  fit.n = st.n;
  fit.mu = st.sum_x;
  for (double& m : fit.mu) m /= static_cast<double>(st.n);
  fit.loss = make_loss(st.binary_mode ? LossFamily::WLsSvm : LossFamily::LsSvm);
  fit.config.lambda = st.lambda;
  fit.scheme.kind = st.binary_mode ? SliceKind::LossWeighted : SliceKind::Response;
  fit.scheme.requested = st.h;
  fit.scheme.binary_response = st.binary_mode;
  for (const auto& s : st.slices) {
    fit.scheme.cutpoints.push_back(s.cutpoint);
    SliceSolution sol;
    sol.alpha = s.r[0];
    sol.beta.assign(s.r.begin() + 1, s.r.end());
    sol.converged = true;
    fit.slices.push_back(std::move(sol));
  }
  json doc = to_json(fit);
  doc["schema_version"] = kFitSchemaVersion;
  doc["kind"] = "stream";
  doc["columns"] = columns;
  doc["response"] = response;
  json a = json::array();
  for (const auto& m : res.a) a.push_back(to_json(m));
  doc["r"] = res.r;
  doc["A"] = a;
  return doc;
}

int cmd_stream(const RunConfig& cfg, std::ostream& out, std::istream& in) {
  std::optional<StreamState> state;
  if (!cfg.resume.empty()) state = stream_state_from_json(read_json(cfg.resume));
  const std::string prefix = output_prefix(cfg);
  std::size_t count = 0;

  auto consume = [&](const CsvTable& table) {
    const Dataset data = split_response(table, cfg.response);
    state = state ? stream_update(std::move(*state), data.x, data.y)
                  : stream_init(data.x, data.y, cfg.h, cfg.lambda);
    ++count;
    write_json(prefix + ".state.json", to_json(*state));
    write_json(prefix + ".fit.json", stream_fit_document(*state, data.predictors, data.response));
    out << "batch " << count << ": rows " << data.x.rows() << ", total " << state->n << '\n';
  };

  if (!cfg.batches.empty()) {
    if (!fs::is_directory(cfg.batches))
      throw InputError(kModule, "'" + cfg.batches + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.batches))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) consume(read_csv_file(f.string()));
  } else {
    CsvChunkReader reader(in);
    while (auto chunk = reader.next()) consume(*chunk);
  }
  if (count == 0) throw InputError(kModule, "stream received no batches");
  print_vector(out, "evalues:", stream_result(*state).evalues);
  return 0;
}

int cmd_project(const RunConfig& cfg, std::ostream& out, std::istream& in) {
  if (cfg.fit.empty()) throw InputError(kModule, "project needs --fit");
  const json doc = read_json(cfg.fit);
  const CsvTable table = read_table(cfg.input, in);
  std::vector<std::string> columns;
  std::string kind;
  try {
    columns = doc.at("columns").get<std::vector<std::string>>();
    kind = doc.at("kind").get<std::string>();
  } catch (const json::exception& e) {
    throw InputError(kModule, std::string("fit file lacks columns/kind: ") + e.what());
  }
  const Matrix x = select_columns(table, columns);
  Matrix sp;
  if (kind == "kernel") {
    NpmFit fit{kernel_basis_from_json(doc.at("kernel")), pm_fit_from_json(doc)};
    sp = project_nonlinear(fit, x, cfg.d ? cfg.d : 2);
  } else {
    sp = project(pm_fit_from_json(doc), x, cfg.d ? cfg.d : 1);
  }
  const std::string path = output_prefix(cfg) + ".projected.csv";
  auto f = open_output(path);
  write_csv(f, predictor_header(sp.cols()), sp);
  out << "wrote " << sp.rows() << " rows to " << path << '\n';
  return 0;
}

int cmd_generate(const RunConfig& cfg, std::size_t p, std::ostream& out) {
  const auto model = parse_model(cfg.model);
  if (!model)
    throw InputError(kModule, "unknown model '" + cfg.model + "'; use 12, 14 or binary12");
  const SimData data = simulate(*model, cfg.n ? cfg.n : 200, p, cfg.seed);
  std::vector<std::string> header;
  for (std::size_t j = 1; j <= p; ++j) header.push_back("x" + std::to_string(j));
  header.push_back("y");
  Matrix table(data.x.rows(), p + 1);
  for (std::size_t i = 0; i < data.x.rows(); ++i) {
    for (std::size_t j = 0; j < p; ++j) table(i, j) = data.x(i, j);
    table(i, p) = data.y[i];
  }
  if (cfg.out.empty() || cfg.out == "-") {
    write_csv(out, header, table);
  } else {
    auto f = open_output(cfg.out);
    write_csv(f, header, table);
  }
  return 0;
}

}  // namespace

LossSpec resolve_loss(const std::string& name, const std::string& mtype) {
  if (mtype != "m" && mtype != "r")
    throw InputError(kModule, "--mtype must be 'm' (margin) or 'r' (residual)");
  if (auto family = parse_family(name)) return make_loss(*family);
  if (name.rfind(kCustomPrefix, 0) == 0) {
    auto expr = std::make_shared<const Expression>(
        Expression::parse(name.substr(std::string_view(kCustomPrefix).size())));
    return make_custom_loss([expr](double u) { return (*expr)(u); },
                            mtype == "r" ? MarginType::Residual : MarginType::Margin);
  }
  throw InputError(kModule, "unknown loss '" + name + "'; valid names: " + joined_loss_names() +
                                ", or custom:<expression in u>");
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err,
        std::istream& in) {
  RunConfig cfg;
  double gamma = 0.0;
  std::size_t p = 5;

  CLI::App app{"Sufficient dimension reduction with principal machines"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");  // frees -h/--h for slices

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("-i,--input", cfg.input, "CSV file with a header row ('-' for stdin)");
    sub->add_option("--y", cfg.response, "Response column name or 1-based index");
    sub->add_option("-o,--out", cfg.out, "Output path prefix");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--loss", cfg.loss, "Loss: " + joined_loss_names() + ", or custom:<expr in u>");
    sub->add_option("--h", cfg.h, "Number of slices");
    sub->add_option("--lambda", cfg.lambda, "Cost parameter");
    sub->add_option("--eta", cfg.eta, "Learning rate");
    sub->add_option("--eps", cfg.eps, "Convergence threshold");
    sub->add_option("--max-iter", cfg.max_iter, "Maximum number of sweeps");
    sub->add_option("--mtype", cfg.mtype, "Margin type of a custom loss: m or r");
    sub->add_option("--d", cfg.d, "Number of sufficient predictors written out");
    sub->add_flag("--no-warm-start", [&](std::int64_t) { cfg.warm_start = false; },
                  "Start every slice from zero");
  };

  auto* fit = app.add_subcommand("fit", "Linear principal machine");
  add_data(fit);
  add_solver(fit);

  auto* kfit = app.add_subcommand("fit-kernel", "Kernel principal machine (RBF)");
  add_data(kfit);
  add_solver(kfit);
  kfit->add_option("--b", cfg.b, "Number of kernel basis functions (default floor(n/3))");
  auto* gamma_opt = kfit->add_option("--gamma", gamma, "RBF bandwidth (default: median heuristic)");

  auto* bic = app.add_subcommand("bic", "Structural dimension by the BIC-type criterion");
  bic->add_option("--fit", cfg.fit, "fit.json produced by fit");
  bic->add_option("--evalues", cfg.evalues, "Comma-separated eigenvalues instead of --fit");
  bic->add_option("--n", cfg.n, "Sample size (read from the fit file when omitted)");
  bic->add_option("--rho", cfg.rho, "Penalty hyperparameter");
  bic->add_option("--p-max", cfg.p_max, "Largest dimension considered (default p)");
  bic->add_option("-o,--out", cfg.out, "Output path prefix");

  auto* stream = app.add_subcommand(
      "stream", "Realtime least-squares machine over batches; slice cutpoints are frozen "
                "at the first batch");
  add_data(stream);
  stream->add_option("--batches", cfg.batches, "Directory of batch CSVs, read in name order");
  stream->add_option("--resume", cfg.resume, "State snapshot to continue from");
  stream->add_option("--h", cfg.h, "Number of slices");
  stream->add_option("--lambda", cfg.lambda, "Cost parameter");

  auto* proj = app.add_subcommand("project", "Sufficient predictors for new data");
  add_data(proj);
  proj->add_option("--fit", cfg.fit, "fit.json produced by fit, fit-kernel or stream");
  proj->add_option("--d", cfg.d, "Number of sufficient predictors");

  auto* gen = app.add_subcommand("generate", "Write a seeded synthetic data set as CSV");
  gen->add_option("--model", cfg.model, "12, 14 or binary12");
  gen->add_option("--n", cfg.n, "Rows (default 200)");
  gen->add_option("--p", p, "Predictors (default 5)");
  gen->add_option("--seed", cfg.seed, "Random seed");
  gen->add_option("-o,--out", cfg.out, "Output file (default stdout)");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gamma_opt->count()) cfg.gamma = gamma;
    if (*fit) return cfg.command = "fit", cmd_fit(cfg, out, in);
    if (*kfit) return cfg.command = "fit-kernel", cmd_fit_kernel(cfg, out, in);
    if (*bic) return cfg.command = "bic", cmd_bic(cfg, out);
    if (*stream) return cfg.command = "stream", cmd_stream(cfg, out, in);
    if (*proj) return cfg.command = "project", cmd_project(cfg, out, in);
    if (*gen) return cfg.command = "generate", cmd_generate(cfg, p, out);
  } catch (const NumericError& e) {
    err << "pmsdr: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "pmsdr: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "pmsdr: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace pmsdr::cli
