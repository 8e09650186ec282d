#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "siotrust/evaluation.hpp"
#include "siotrust/factorization.hpp"
#include "siotrust/graph.hpp"
#include "siotrust/simulation.hpp"
#include "siotrust/social_net.hpp"
#include "siotrust/trust_pattern.hpp"

namespace py = pybind11;
using namespace siotrust;

namespace {

HellingerMode mode_of(const std::string& s) {
  if (s == "literal") return HellingerMode::Literal;
  if (s == "canonical") return HellingerMode::Canonical;
  throw std::invalid_argument("unknown hellinger mode: " + s);
}

TrustPatternOptions pattern_options(const std::string& similarity,
                                    const std::string& centrality, double beta,
                                    double bayesian_delta) {
  TrustPatternOptions opt;
  opt.similarity = similarity_from_string(similarity);
  opt.centrality = centrality_from_string(centrality);
  opt.beta = beta;
  opt.bayesian_delta = bayesian_delta;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "trust engine core: friendship networks from rating behavior and "
            "socially regularized logistic matrix factorization";

  py::register_exception<DataError>(m, "DataError");
  py::register_exception<DivergenceError>(m, "DivergenceError");

  py::class_<TrustBipartiteGraph>(m, "TrustGraph")
      .def(py::init<std::size_t, std::size_t>(), py::arg("trustors"),
           py::arg("trustees"))
      .def("rate", &TrustBipartiteGraph::add_experience_external,
           py::arg("trustor"), py::arg("trustee"), py::arg("rating"),
           "Record an experience on the 1..5 scale")
      .def("rate_internal", &TrustBipartiteGraph::add_experience)
      .def("value", &TrustBipartiteGraph::edge_value)
      .def("has_edge", &TrustBipartiteGraph::has_edge)
      .def("trustor_count", &TrustBipartiteGraph::trustor_count)
      .def("trustee_count", &TrustBipartiteGraph::trustee_count)
      .def("rating_count", &TrustBipartiteGraph::edge_count);

  m.def(
      "read_ratings_tsv",
      [](const std::string& text) {
        std::istringstream in(text);
        return read_ratings_tsv(in);
      },
      "Parse trustor<TAB>trustee<TAB>rating lines on the 1..5 scale");
  m.def("read_ratings_tsv_file", &read_ratings_tsv_file);
  m.def("write_ratings_tsv", [](const TrustBipartiteGraph& g) {
    std::ostringstream out;
    write_ratings_tsv(g, out);
    return out.str();
  });

  py::class_<DistanceMatrix>(m, "DistanceMatrix")
      .def("__len__", &DistanceMatrix::size)
      .def("distance", &DistanceMatrix::distance,
           "Defined pairwise distance or None")
      .def("off_diagonal", &DistanceMatrix::off_diagonal);

  py::class_<TrustorSocialNetwork>(m, "SocialNetwork")
      .def("__len__", &TrustorSocialNetwork::size)
      .def("threshold", &TrustorSocialNetwork::threshold)
      .def("adjacent", &TrustorSocialNetwork::adjacent)
      .def("friends",
           [](const TrustorSocialNetwork& net, std::size_t i) {
             return net.friends(i);
           })
      .def("degree", &TrustorSocialNetwork::degree)
      .def("edge_count", &TrustorSocialNetwork::edge_count);

  py::class_<SocialBuildResult>(m, "SocialBuild")
      .def_readonly("network", &SocialBuildResult::network)
      .def_readonly("distances", &SocialBuildResult::distances);

  m.def(
      "build_social_network",
      [](const TrustBipartiteGraph& g, double threshold,
         const std::string& mode) {
        return build_social_network(g, threshold, mode_of(mode));
      },
      py::arg("graph"), py::arg("threshold"), py::arg("mode") = "literal");
  m.def(
      "build_social_network_percentile",
      [](const TrustBipartiteGraph& g, double percentile,
         const std::string& mode) {
        return build_social_network_percentile(g, percentile, mode_of(mode));
      },
      py::arg("graph"), py::arg("percentile") = 20.0,
      py::arg("mode") = "literal");

  py::class_<TrustPatternMatrix>(m, "TrustPattern")
      .def("__len__", &TrustPatternMatrix::size)
      .def("gamma", &TrustPatternMatrix::gamma)
      .def("row", [](const TrustPatternMatrix& tp, std::size_t i) {
        return tp.row(i);
      });

  m.def(
      "trust_pattern",
      [](const TrustBipartiteGraph& g, const SocialBuildResult& social,
         const std::string& similarity, const std::string& centrality,
         double beta, double bayesian_delta) {
        return trust_pattern(
            g, social.network, social.distances,
            pattern_options(similarity, centrality, beta, bayesian_delta));
      },
      py::arg("graph"), py::arg("social"), py::arg("similarity") = "hellinger",
      py::arg("centrality") = "none", py::arg("beta") = 1.0,
      py::arg("bayesian_delta") = 0.0);
  m.def("binary_trust_pattern", [](const SocialBuildResult& social) {
    return binary_trust_pattern(social.network);
  });

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("latent_dim", &TrainConfig::latent_dim)
      .def_readwrite("alpha", &TrainConfig::alpha)
      .def_readwrite("lambda_s", &TrainConfig::lambda_s)
      .def_readwrite("lambda_r", &TrainConfig::lambda_r)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("init_scale", &TrainConfig::init_scale);

  py::class_<LatentFactors>(m, "LatentFactors")
      .def("trustor_count", &LatentFactors::trustor_count)
      .def("trustee_count", &LatentFactors::trustee_count)
      .def("latent_dim", &LatentFactors::latent_dim)
      .def("loss_history", [](const LatentFactors& f) {
        return f.loss_history();
      });

  py::class_<PredictionMatrix>(m, "Predictions")
      .def_readonly("trustors", &PredictionMatrix::n)
      .def_readonly("trustees", &PredictionMatrix::m)
      .def("at", &PredictionMatrix::at)
      .def("row", [](const PredictionMatrix& p, std::size_t i) {
        if (i >= p.n) throw std::out_of_range("trustor id out of range");
        return std::vector<double>(p.values.begin() + i * p.m,
                                   p.values.begin() + (i + 1) * p.m);
      });

  m.def("train", &sgd_train, py::arg("graph"), py::arg("pattern"),
        py::arg("config") = TrainConfig{});
  m.def("predict", &predict);
  m.def("predict_blended", &predict_blended);
  m.def("rank_trustees", &rank_trustees);
  m.def("save_factors", [](const LatentFactors& f) {
    std::ostringstream out;
    save_factors(f, out);
    return out.str();
  });
  m.def("load_factors", [](const std::string& text) {
    std::istringstream in(text);
    return load_factors(in);
  });

  m.def(
      "evaluate",
      [](const TrustBipartiteGraph& g, double beta, double alpha,
         std::size_t latent_dim, const std::string& similarity,
         const std::string& centrality, double split_fraction,
         std::uint64_t split_seed, std::uint64_t seed, std::size_t epochs,
         double threshold_percentile, const std::string& predictor,
         bool binary_gamma) {
        EvalPoint point;
        point.beta = beta;
        point.alpha = alpha;
        point.latent_dim = latent_dim;
        point.similarity = similarity_from_string(similarity);
        point.centrality = centrality_from_string(centrality);
        point.split_fraction = split_fraction;
        EvalOptions opt;
        opt.train.seed = seed;
        opt.train.epochs = epochs;
        opt.split_seed = split_seed;
        opt.threshold_percentile = threshold_percentile;
        opt.binary_gamma = binary_gamma;
        if (predictor == "blended") opt.predictor = PredictorForm::Blended;
        else if (predictor != "printed")
          throw std::invalid_argument("unknown predictor: " + predictor);
        MetricReport r = evaluate_point(g, point, opt);
        py::dict out;
        out["rmse"] = r.rmse;
        out["mae"] = r.mae;
        out["coverage"] = r.coverage;
        out["precision"] = r.precision;
        out["f_measure"] = r.f_measure;
        out["n"] = r.n;
        return out;
      },
      py::arg("graph"), py::arg("beta") = 1.0, py::arg("alpha") = 0.4,
      py::arg("latent_dim") = 4, py::arg("similarity") = "hellinger",
      py::arg("centrality") = "none", py::arg("split_fraction") = 0.75,
      py::arg("split_seed") = 0, py::arg("seed") = 0, py::arg("epochs") = 300,
      py::arg("threshold_percentile") = 20.0, py::arg("predictor") = "printed",
      py::arg("binary_gamma") = false,
      "Hold-out metrics for one parameter setting");

  m.def(
      "simulate",
      [](double maliciousness, std::uint64_t seed, double horizon_hours,
         bool forgetful_baseline) {
        SimConfig cfg;
        cfg.maliciousness = maliciousness;
        cfg.seed = seed;
        cfg.horizon_hours = horizon_hours;
        cfg.forgetful_baseline = forgetful_baseline;
        SimWorld world = build_world(cfg);
        TrajectoryLog log = run_simulation(world, cfg);
        py::list tracked;
        for (std::size_t j : log.tracked)
          tracked.append(py::make_tuple(j, to_string(world.trustees[j].attack)));
        py::list snapshots;
        for (const TrajectorySnapshot& s : log.snapshots)
          snapshots.append(py::make_tuple(s.epoch_hour, s.trustee, s.mean_pred,
                                          s.band_lo, s.band_hi, s.objective));
        py::dict out;
        out["tracked"] = tracked;
        out["snapshots"] = snapshots;
        out["selection_count"] = log.selections.size();
        return out;
      },
      py::arg("maliciousness") = 0.3, py::arg("seed") = 0,
      py::arg("horizon_hours") = 150.0, py::arg("forgetful_baseline") = false,
      "Hostile-environment run; returns tracked trustees and their "
      "predicted-trust trajectories");

  m.attr("__version__") = "0.1.0";
}
