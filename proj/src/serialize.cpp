#include "pmsdr/serialize.hpp"

#include <string>

#include "pmsdr/error.hpp"

namespace pmsdr {

using nlohmann::json;

namespace {

constexpr const char* kModule = "serialize";

const char* kind_name(SliceKind k) {
  switch (k) {
    case SliceKind::Response: return "response";
    case SliceKind::LossWeighted: return "loss-weighted";
    case SliceKind::LossParametric: return "loss-parametric";
  }
  return "response";
}

SliceKind kind_from(const std::string& s) {
  if (s == "response") return SliceKind::Response;
  if (s == "loss-weighted") return SliceKind::LossWeighted;
  if (s == "loss-parametric") return SliceKind::LossParametric;
  throw InputError(kModule, "unknown slicing kind '" + s + "'");
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(kModule, std::string("malformed document: ") + e.what());
  }
}

}  // namespace

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_array()) throw InputError(kModule, "matrix must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j.at(0).size() : 0;
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      const auto& r = j.at(i);
      if (r.size() != cols) throw InputError(kModule, "ragged matrix");
      for (std::size_t c = 0; c < cols; ++c) m(i, c) = r.at(c).get<double>();
    }
    return m;
  });
}

json to_json(const PmFit& fit) {
  json slices = json::array();
  for (const auto& s : fit.slices) {
    slices.push_back({{"alpha", s.alpha},
                      {"beta", s.beta},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"final_step", s.final_step},
                      {"step_halvings", s.step_halvings},
                      {"final_eta", s.final_eta}});
  }
  return {
      {"loss", std::string(family_name(fit.loss.family))},
      {"mtype", fit.loss.mtype == MarginType::Margin ? "m" : "r"},
      {"n", fit.n},
      {"p", fit.dim()},
      {"config",
       {{"lambda", fit.config.lambda},
        {"eta", fit.config.eta},
        {"eps", fit.config.eps},
        {"max_iter", fit.config.max_iter},
        {"warm_start", fit.config.warm_start}}},
      {"slicing",
       {{"kind", kind_name(fit.scheme.kind)},
        {"h", fit.scheme.requested},
        {"cutpoints", fit.scheme.cutpoints},
        {"dropped", fit.scheme.dropped},
        {"binary_response", fit.scheme.binary_response}}},
      {"evalues", fit.evalues},
      {"evectors", to_json(fit.evectors)},
      {"mu", fit.mu},
      {"slices", slices},
  };
}

PmFit pm_fit_from_json(const json& j) {
  return guarded([&] {
    PmFit fit;
    const std::string loss = j.at("loss").get<std::string>();
    if (auto fam = parse_family(loss)) {
      fit.loss.family = *fam;
      fit.loss.mtype = natural_mtype(*fam);
    } else {
      fit.loss.family = LossFamily::Custom;
      fit.loss.mtype = j.at("mtype").get<std::string>() == "r" ? MarginType::Residual
                                                               : MarginType::Margin;
    }
    fit.n = j.at("n").get<std::size_t>();
    const auto& c = j.at("config");
    fit.config.lambda = c.at("lambda").get<double>();
    fit.config.eta = c.at("eta").get<double>();
    fit.config.eps = c.at("eps").get<double>();
    fit.config.max_iter = c.at("max_iter").get<std::size_t>();
    fit.config.warm_start = c.at("warm_start").get<bool>();
    const auto& s = j.at("slicing");
    fit.scheme.kind = kind_from(s.at("kind").get<std::string>());
    fit.scheme.requested = s.at("h").get<std::size_t>();
    fit.scheme.cutpoints = s.at("cutpoints").get<Vector>();
    fit.scheme.dropped = s.at("dropped").get<std::size_t>();
    fit.scheme.binary_response = s.at("binary_response").get<bool>();
    fit.evalues = j.at("evalues").get<Vector>();
    fit.evectors = matrix_from_json(j.at("evectors"));
    fit.mu = j.at("mu").get<Vector>();
    for (const auto& e : j.at("slices")) {
      SliceSolution sol;
      sol.alpha = e.at("alpha").get<double>();
      sol.beta = e.at("beta").get<Vector>();
      sol.iterations = e.at("iterations").get<std::size_t>();
      sol.converged = e.at("converged").get<bool>();
      sol.final_step = e.at("final_step").get<double>();
      sol.step_halvings = e.at("step_halvings").get<std::size_t>();
      sol.final_eta = e.at("final_eta").get<double>();
      fit.slices.push_back(std::move(sol));
    }
    if (fit.evectors.rows() != fit.mu.size() || fit.evectors.cols() != fit.mu.size())
      throw InputError(kModule, "evectors do not match the predictor dimension");
    return fit;
  });
}

json to_json(const KernelBasis& basis) {
  return {{"gamma", basis.gamma},       {"b", basis.size()},
          {"train_x", to_json(basis.train_x)}, {"q", to_json(basis.q)},
          {"lam", basis.lam},           {"psi_bar", basis.psi_bar},
          {"col_means", basis.col_means}};
}

KernelBasis kernel_basis_from_json(const json& j) {
  return guarded([&] {
    KernelBasis basis;
    basis.gamma = j.at("gamma").get<double>();
    basis.train_x = matrix_from_json(j.at("train_x"));
    basis.q = matrix_from_json(j.at("q"));
    basis.lam = j.at("lam").get<Vector>();
    basis.psi_bar = j.at("psi_bar").get<Vector>();
    basis.col_means = j.at("col_means").get<Vector>();
    const std::size_t n = basis.train_x.rows();
    if (basis.q.rows() != n || basis.q.cols() != basis.lam.size() ||
        basis.psi_bar.size() != basis.lam.size() || basis.col_means.size() != n)
      throw InputError(kModule, "inconsistent kernel basis dimensions");
    basis.features = feature_map(basis, basis.train_x);
    return basis;
  });
}

json to_json(const StreamState& st) {
  json slices = json::array();
  for (const auto& s : st.slices)
    slices.push_back({{"cutpoint", s.cutpoint}, {"s", s.s}, {"a", to_json(s.a)}, {"r", s.r}});
  return {{"format", "pmsdr-stream-state"},
          {"schema_version", kStreamSchemaVersion},
          {"n", st.n},
          {"p", st.dim()},
          {"h", st.h},
          {"lambda", st.lambda},
          {"binary_mode", st.binary_mode},
          {"sum_x", st.sum_x},
          {"sum_xx", to_json(st.sum_xx)},
          {"slices", slices}};
}

StreamState stream_state_from_json(const json& j) {
  return guarded([&] {
    if (j.value("format", "") != "pmsdr-stream-state")
      throw InputError(kModule, "not a stream state snapshot");
    const int version = j.at("schema_version").get<int>();
    if (version != kStreamSchemaVersion)
      throw InputError(kModule, "unsupported stream state version " + std::to_string(version));
    StreamState st;
    st.n = j.at("n").get<std::size_t>();
    st.h = j.at("h").get<std::size_t>();
    st.lambda = j.at("lambda").get<double>();
    st.binary_mode = j.at("binary_mode").get<bool>();
    st.sum_x = j.at("sum_x").get<Vector>();
    st.sum_xx = matrix_from_json(j.at("sum_xx"));
    const std::size_t p = st.sum_x.size();
    for (const auto& e : j.at("slices")) {
      StreamSlice s;
      s.cutpoint = e.at("cutpoint").get<double>();
      s.s = e.at("s").get<Vector>();
      s.a = matrix_from_json(e.at("a"));
      s.r = e.at("r").get<Vector>();
      if (s.s.size() != p + 1 || s.r.size() != p + 1 || s.a.rows() != p + 1 || s.a.cols() != p + 1)
        throw InputError(kModule, "inconsistent stream slice dimensions");
      st.slices.push_back(std::move(s));
    }
    if (st.sum_xx.rows() != p || st.sum_xx.cols() != p)
      throw InputError(kModule, "inconsistent stream moment dimensions");
    return st;
  });
}

}  // namespace pmsdr
