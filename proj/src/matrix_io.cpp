#include "sosgap/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "sosgap/error.hpp"

namespace sosgap {

using nlohmann::json;

json params_to_json(const ModelParams& p) {
  json j;
  j["kind"] = p.kind == ModelKind::Sbm ? "sbm" : "submatrix";
  j["d"] = p.d;
  j["s_star"] = p.s_star;
  j["beta_star"] = p.beta_star;
  if (p.kind == ModelKind::Sbm) {
    j["beta_tilde"] = p.beta_tilde;
  } else if (const auto* g = std::get_if<GaussianNoise>(&p.noise)) {
    j["noise"] = {{"type", "gaussian"}, {"sigma", g->sigma}};
  } else {
    j["noise"] = {{"type", "rademacher"}, {"nu", std::get<RademacherNoise>(p.noise).nu}};
  }
  j["seed"] = p.seed;
  return j;
}

ModelParams params_from_json(const json& j) {
  try {
    ModelParams p;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "sbm") {
      p.kind = ModelKind::Sbm;
    } else if (kind == "submatrix") {
      p.kind = ModelKind::Submatrix;
    } else {
      fail(ErrorKind::InvalidParams, "unknown model kind '" + kind + "'");
    }
    p.d = j.at("d").get<int>();
    p.s_star = j.at("s_star").get<int>();
    p.beta_star = j.at("beta_star").get<double>();
    p.beta_tilde = j.value("beta_tilde", 0.0);
    if (j.contains("noise")) {
      const auto& n = j.at("noise");
      const auto type = n.at("type").get<std::string>();
      if (type == "gaussian") {
        p.noise = GaussianNoise{n.value("sigma", 1.0)};
      } else if (type == "rademacher") {
        p.noise = RademacherNoise{n.value("nu", 1.0)};
      } else {
        fail(ErrorKind::InvalidParams, "unknown noise type '" + type + "'");
      }
    }
    p.seed = j.value("seed", std::uint64_t{0});
    return p;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParams, std::string("bad model params: ") + e.what());
  }
}

json matrix_to_json(const NoisyMatrix& m, const std::optional<GroundTruth>& truth) {
  json j;
  j["d"] = m.d();
  j["format"] = "upper-tri-row-major";
  j["entries"] = std::vector<double>(m.upper().begin(), m.upper().end());
  if (truth) {
    j["ground_truth"] = {{"support", truth->support}, {"params", params_to_json(truth->params)}};
  }
  return j;
}

MatrixFile matrix_from_json(const json& j) {
  try {
    const int d = j.at("d").get<int>();
    if (j.contains("format") && j.at("format") != "upper-tri-row-major") {
      fail(ErrorKind::InvalidParams, "unsupported matrix format");
    }
    auto entries = j.at("entries").get<std::vector<double>>();
    MatrixFile file{NoisyMatrix(d, std::move(entries)), std::nullopt};
    if (j.contains("ground_truth")) {
      const auto& g = j.at("ground_truth");
      GroundTruth truth;
      truth.support = g.at("support").get<std::vector<int>>();
      if (g.contains("params")) truth.params = params_from_json(g.at("params"));
      file.ground_truth = std::move(truth);
    }
    return file;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParams, std::string("bad matrix json: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "cannot parse " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

void write_matrix_file(const std::filesystem::path& path, const NoisyMatrix& m,
                       const std::optional<GroundTruth>& truth) {
  write_text_file(path, matrix_to_json(m, truth).dump(1) + "\n");
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  return matrix_from_json(read_json_file(path));
}

}  // namespace sosgap
