#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "otl/jda.hpp"

namespace otl {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json vector_to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector vector_from_json(const json& j) {
  const auto vals = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(vals.data(), static_cast<int>(vals.size()));
}

}  // namespace

void save_artifacts(const ArtifactsBundle& bundle, const std::string& dir) {
  fs::create_directories(dir);
  const auto& a = bundle.artifacts;
  json manifest;
  manifest["dim"] = bundle.dim;
  manifest["num_classes"] = bundle.num_classes;
  manifest["C"] = a.pa_C;
  manifest["jda"] = {{"subspace_dim", a.jda_echo.subspace_dim},
                     {"iterations", a.jda_echo.iterations},
                     {"reg", a.jda_echo.reg}};
  manifest["domains"] = json::array();
  for (size_t i = 0; i < a.matrices.size(); ++i) {
    const std::string matrix_file = "matrix_" + std::to_string(i) + ".csv";
    const std::string model_file = "model_" + std::to_string(i) + ".csv";
    export_matrix(a.matrices[i], dir + "/" + matrix_file);
    save_model(a.source_models[i], dir + "/" + model_file);

    const SourceStats& s = a.source_stats[i];
    json class_means = json::array();
    for (int k = 0; k < s.class_means.cols(); ++k) {
      class_means.push_back(vector_to_json(s.class_means.col(k)));
    }
    json jd;
    jd["name"] = a.matrices[i].source_domain;
    jd["matrix"] = matrix_file;
    jd["model"] = model_file;
    jd["overall_mean"] = vector_to_json(s.overall_mean);
    jd["class_means"] = class_means;
    jd["class_counts"] =
        std::vector<int>(s.class_counts.data(),
                         s.class_counts.data() + s.class_counts.size());
    jd["source_path"] =
        i < bundle.source_paths.size() ? bundle.source_paths[i] : "";
    manifest["domains"].push_back(std::move(jd));
  }
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << manifest.dump(2) << '\n';
}

ArtifactsBundle load_artifacts(const std::string& dir) {
  std::ifstream in(dir + "/manifest.json");
  if (!in) throw std::runtime_error("cannot open " + dir + "/manifest.json");
  json manifest;
  in >> manifest;

  ArtifactsBundle bundle;
  bundle.dim = manifest.at("dim");
  bundle.num_classes = manifest.at("num_classes");
  bundle.artifacts.pa_C = manifest.at("C");
  bundle.artifacts.jda_echo.subspace_dim = manifest.at("jda").at("subspace_dim");
  bundle.artifacts.jda_echo.iterations = manifest.at("jda").at("iterations");
  bundle.artifacts.jda_echo.reg = manifest.at("jda").at("reg");

  for (const auto& jd : manifest.at("domains")) {
    TransformMatrix A = import_matrix(dir + "/" + jd.at("matrix").get<std::string>());
    A.source_domain = jd.at("name");
    bundle.artifacts.matrices.push_back(std::move(A));
    bundle.artifacts.source_models.push_back(
        load_model(dir + "/" + jd.at("model").get<std::string>()));

    SourceStats s;
    s.overall_mean = vector_from_json(jd.at("overall_mean"));
    const auto& jcm = jd.at("class_means");
    s.class_means.resize(s.overall_mean.size(), jcm.size());
    for (size_t k = 0; k < jcm.size(); ++k) {
      s.class_means.col(static_cast<int>(k)) = vector_from_json(jcm[k]);
    }
    const auto counts = jd.at("class_counts").get<std::vector<int>>();
    s.class_counts =
        Eigen::Map<const IntVector>(counts.data(), static_cast<int>(counts.size()));
    bundle.artifacts.source_stats.push_back(std::move(s));
    bundle.source_paths.push_back(jd.at("source_path"));
  }
  return bundle;
}

}  // namespace otl
