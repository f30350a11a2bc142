// Copyright 2026 The egonet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <sstream>
#include <string>

#include "egonet/diffusion.hpp"
#include "egonet/error.hpp"
#include "egonet/ingest.hpp"
#include "egonet/keyvalue.hpp"
#include "egonet/layering.hpp"
#include "egonet/model.hpp"
#include "egonet/pipeline.hpp"
#include "egonet/synthgen.hpp"
#include "egonet/tie_strength.hpp"

namespace py = pybind11;
using namespace egonet;

namespace {

layers::AicOptions aic_options(const std::string& likelihood, double variance_floor) {
  layers::AicOptions o;
  if (likelihood == "classification") {
    o.model = layers::LikelihoodModel::classification;
  } else if (likelihood != "gaussian_mixture") {
    throw Error(ErrorCode::config, "likelihood must be gaussian_mixture or classification");
  }
  o.variance_floor = variance_floor;
  return o;
}

void bind_model(py::module_& m) {
  py::class_<AccountId>(m, "AccountId")
      .def(py::init([](std::uint64_t v) { return AccountId{v}; }))
      .def_readwrite("value", &AccountId::value)
      .def("__int__", [](const AccountId& a) { return a.value; })
      .def("__eq__", [](const AccountId& a, const AccountId& b) { return a == b; })
      .def("__hash__", [](const AccountId& a) { return std::hash<AccountId>{}(a); })
      .def("__repr__", [](const AccountId& a) { return "AccountId(" + std::to_string(a.value) + ")"; });

  py::enum_<AlterClass>(m, "AlterClass")
      .value("socially_relevant", AlterClass::socially_relevant)
      .value("other", AlterClass::other)
      .value("unknown", AlterClass::unknown);

  py::class_<WindowCounts>(m, "WindowCounts")
      .def(py::init([](std::uint64_t n1, std::uint64_t n2, std::uint64_t n3, std::uint64_t n4) {
             return WindowCounts{n1, n2, n3, n4};
           }),
           py::arg("n1"), py::arg("n2"), py::arg("n3"), py::arg("n4"))
      .def_readwrite("n1", &WindowCounts::n1)
      .def_readwrite("n2", &WindowCounts::n2)
      .def_readwrite("n3", &WindowCounts::n3)
      .def_readwrite("n4", &WindowCounts::n4)
      .def("nested", &WindowCounts::nested);

  py::class_<WindowConfig>(m, "WindowConfig")
      .def(py::init<>())
      .def_readwrite("w1", &WindowConfig::w1)
      .def_readwrite("w2", &WindowConfig::w2)
      .def_readwrite("w3", &WindowConfig::w3)
      .def_readwrite("w4", &WindowConfig::w4);

  py::class_<TieRecord>(m, "TieRecord")
      .def(py::init<>())
      .def_readwrite("ego", &TieRecord::ego)
      .def_readwrite("alter", &TieRecord::alter)
      .def_readwrite("frequency", &TieRecord::frequency)
      .def_readwrite("normalized_frequency", &TieRecord::normalized_frequency)
      .def_readwrite("link_lifespan", &TieRecord::link_lifespan)
      .def_readwrite("reply_count", &TieRecord::reply_count)
      .def_readwrite("retweet_count", &TieRecord::retweet_count)
      .def_readwrite("retweet_lifespan", &TieRecord::retweet_lifespan)
      .def_readwrite("alter_class", &TieRecord::alter_class)
      .def("active", &TieRecord::active);

  py::class_<EgoNetwork>(m, "EgoNetwork")
      .def(py::init<>())
      .def_readwrite("ego", &EgoNetwork::ego)
      .def_readwrite("ego_lifespan", &EgoNetwork::ego_lifespan)
      .def_readwrite("ties", &EgoNetwork::ties)
      .def_readwrite("total_replies", &EgoNetwork::total_replies)
      .def_readwrite("total_retweets", &EgoNetwork::total_retweets)
      .def_readwrite("total_interactions", &EgoNetwork::total_interactions)
      .def("active_ties", &EgoNetwork::active_ties)
      .def("violations", [](const EgoNetwork& net) {
        py::list out;
        for (const auto& v : validate(net)) out.append(v.field + ": " + v.message);
        return out;
      });
}

void bind_tie_strength(py::module_& m) {
  m.def("classify_relationship", [](const WindowCounts& c) { return tie::index(tie::classify_relationship(c)); },
        "Relationship class 1..4 of a link's window counts.");
  m.def(
      "estimate_link",
      [](const WindowCounts& c, const WindowConfig& cfg, std::array<double, 4> a, std::array<double, 4> mult) {
        tie::CalibrationConstants cal;
        cal.a = a;
        cal.m = mult;
        const auto e = tie::estimate_link(c, cfg, cal);
        py::dict d;
        d["cls"] = tie::index(e.cls);
        d["h"] = e.h;
        d["duration"] = e.duration;
        d["raw_frequency"] = e.frequency.raw;
        d["frequency"] = e.frequency.scaled;
        return d;
      },
      py::arg("counts"), py::arg("cfg") = WindowConfig{}, py::arg("a") = std::array<double, 4>{1, 1, 1, 1},
      py::arg("m") = std::array<double, 4>{0.18, 0.82, 1, 1});
  m.def(
      "calibrate_a",
      [](const std::vector<double>& h, int k, const WindowConfig& cfg, double target) {
        return tie::calibrate_a(h, tie::class_from_index(k), cfg, target);
      },
      py::arg("h"), py::arg("k"), py::arg("cfg"), py::arg("target"));
}

void bind_layering(py::module_& m) {
  py::class_<layers::Cluster>(m, "Cluster")
      .def_readonly("begin", &layers::Cluster::begin)
      .def_readonly("size", &layers::Cluster::size)
      .def_readonly("mean", &layers::Cluster::mean)
      .def_readonly("within_ss", &layers::Cluster::within_ss);

  py::class_<layers::ClusterSolution>(m, "ClusterSolution")
      .def_readonly("k", &layers::ClusterSolution::k)
      .def_readonly("sorted_values", &layers::ClusterSolution::sorted_values)
      .def_readonly("boundaries", &layers::ClusterSolution::boundaries)
      .def_readonly("clusters", &layers::ClusterSolution::clusters)
      .def_readonly("total_within_ss", &layers::ClusterSolution::total_within_ss)
      .def_readonly("total_ss", &layers::ClusterSolution::total_ss)
      .def("labels", &layers::ClusterSolution::labels);

  m.def(
      "ckmeans_1d", [](const std::vector<double>& v, std::size_t k) { return layers::ckmeans_1d(v, k); },
      py::arg("values"), py::arg("k"));
  m.def(
      "explained_variance", [](const layers::ClusterSolution& s) { return layers::explained_variance(s).value; },
      py::arg("solution"));
  m.def(
      "aic",
      [](const layers::ClusterSolution& s, const std::string& likelihood, double floor) {
        return layers::aic(s, aic_options(likelihood, floor));
      },
      py::arg("solution"), py::arg("likelihood") = "gaussian_mixture", py::arg("variance_floor") = 1e-6);
  m.def(
      "optimal_k",
      [](const std::vector<double>& values, std::size_t k_max, const std::string& likelihood, double floor) {
        return layers::optimal_k(values, k_max, aic_options(likelihood, floor));
      },
      py::arg("values"), py::arg("k_max") = 20, py::arg("likelihood") = "gaussian_mixture",
      py::arg("variance_floor") = 1e-6);
  m.def(
      "build_circles",
      [](const layers::ClusterSolution& s, const std::vector<double>& raw) {
        const auto set = layers::build_circles(s, raw);
        py::list circles;
        for (const auto& c : set.circles) {
          py::dict d;
          d["size"] = c.size;
          d["ring_size"] = c.ring_size;
          d["min_frequency"] = c.min_frequency;
          circles.append(d);
        }
        return py::make_tuple(circles, set.ring_of);
      },
      py::arg("solution"), py::arg("raw_frequencies"));
  m.def(
      "scaling_factors", [](const std::vector<double>& sizes) { return layers::scaling_factors(std::span<const double>(sizes)); },
      py::arg("sizes"));
  m.def("aggregate_ccdf", &layers::aggregate_ccdf, py::arg("values"));
  m.def(
      "map_to_offline",
      [](const std::vector<double>& sizes, const std::vector<double>& mins, std::optional<double> ref) {
        const auto mapping = layers::map_to_offline(sizes, mins, ref);
        py::dict d;
        d["mapped"] = mapping.mapped;
        d["reason"] = mapping.reason;
        d["rescale_factor"] = mapping.rescale_factor;
        py::list names;
        for (const auto& c : mapping.circles) names.append(c.name);
        d["names"] = names;
        return d;
      },
      py::arg("sizes"), py::arg("min_frequencies"), py::arg("reference_outer_size") = py::none());
  m.def(
      "population_summary",
      [](const std::vector<EgoNetwork>& nets, std::size_t k_max, std::size_t fixed_k, unsigned threads) {
        layers::PopulationOptions opt;
        opt.k_max = k_max;
        opt.fixed_k = fixed_k;
        opt.threads = threads;
        const auto s = layers::population_summary(nets, opt);
        py::dict d;
        py::dict kstar;
        for (const auto& row : s.kstar) kstar[py::int_(row.k)] = row.density;
        d["kstar_density"] = kstar;
        py::list circles;
        for (const auto& row : s.circles) {
          py::dict c;
          c["min_freq"] = row.min_frequency.mean;
          c["mean_size"] = row.size.mean;
          c["scaling_factor"] = row.scaling_factor ? py::cast(row.scaling_factor->mean) : py::none();
          circles.append(c);
        }
        d["circles"] = circles;
        d["egos"] = s.egos;
        d["egos_in_circles"] = s.egos_in_circles;
        return d;
      },
      py::arg("nets"), py::arg("k_max") = 20, py::arg("fixed_k") = 5, py::arg("threads") = 1);
}

void bind_diffusion(py::module_& m) {
  m.def("frep", &diffusion::frep, py::arg("net"), py::arg("tie"));
  m.def("fret", &diffusion::fret, py::arg("net"), py::arg("tie"));
  m.def("assign_rings", &diffusion::assign_rings, py::arg("net"), py::arg("k") = 5);
  m.def(
      "correlation_and_fit",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto f = diffusion::correlation_and_fit(x, y);
        py::dict d;
        d["n"] = f.n;
        d["r"] = f.r;
        d["alpha"] = f.alpha;
        d["beta"] = f.beta;
        return d;
      },
      py::arg("x"), py::arg("y"));
}

void bind_synth(py::module_& m) {
  m.def(
      "generate_population",
      [](std::size_t egos, std::uint64_t seed, bool with_diffusion, unsigned threads) {
        synth::PopulationOptions opt;
        opt.egos = egos;
        opt.seed = seed;
        opt.threads = threads;
        const synth::DiffusionSpec diffusion;
        const auto pop = synth::generate_population(synth::LayerSpec{}, with_diffusion ? &diffusion : nullptr, opt);
        std::vector<EgoNetwork> nets;
        nets.reserve(pop.size());
        for (const auto& p : pop) nets.push_back(p.net);
        return nets;
      },
      py::arg("egos"), py::arg("seed") = 1, py::arg("diffusion") = true, py::arg("threads") = 1,
      "Planted population with the default layer and diffusion specs.");
  m.def(
      "brute_force_kmeans", [](const std::vector<double>& v, std::size_t k) { return synth::brute_force_kmeans(v, k); },
      py::arg("values"), py::arg("k"));
  m.def("generate_window_counts", &synth::generate_window_counts, py::arg("true_birth"), py::arg("rate"),
        py::arg("cfg") = WindowConfig{}, py::arg("seed") = 1);
}

void bind_pipeline(py::module_& m) {
  m.def(
      "run_pipeline",
      [](const std::string& stage, const std::map<std::string, std::string>& options) {
        std::string text;
        for (const auto& [k, v] : options) text += k + "=" + v + "\n";
        std::istringstream in(text);
        pipeline::PipelineConfig cfg;
        cfg.apply(KeyValueFile::parse(in));
        static const std::map<std::string, pipeline::Stage> kStages = {{"ingest", pipeline::Stage::ingest},
                                                                       {"layers", pipeline::Stage::layers},
                                                                       {"diffusion", pipeline::Stage::diffusion},
                                                                       {"all", pipeline::Stage::all}};
        const auto it = kStages.find(stage);
        if (it == kStages.end()) throw Error(ErrorCode::config, "unknown stage '" + stage + "'");
        py::gil_scoped_release release;
        return pipeline::run_pipeline(cfg, it->second);
      },
      py::arg("stage"), py::arg("options"),
      "Runs a pipeline stage with key=value options; returns the exit status.");
}

}  // namespace

PYBIND11_MODULE(_egonet, m) {
  m.doc() = "Ego-network layer and diffusion analysis";

  static py::exception<Error> error(m, "EgonetError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  bind_model(m);
  bind_tie_strength(m);
  bind_layering(m);
  bind_diffusion(m);
  bind_synth(m);
  bind_pipeline(m);
}
