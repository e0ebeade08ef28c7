#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "m3gen/corpus.hpp"
#include "m3gen/cpd.hpp"
#include "m3gen/level.hpp"
#include "m3gen/level_io.hpp"
#include "m3gen/metrics.hpp"
#include "m3gen/render.hpp"
#include "m3gen/sampler.hpp"
#include "m3gen/version.hpp"

namespace py = pybind11;
using namespace m3gen;

namespace {

std::optional<Axis> parse_symmetry(const std::string& name) {
  if (name == "none") return std::nullopt;
  return parse_axis(name);
}

const char* rule_name(Rule rule) {
  switch (rule) {
    case Rule::FirstFourCoexistence: return "first-four-coexistence";
    case Rule::JellyOnVoid: return "jelly-on-void";
    case Rule::LockOnVoid: return "lock-on-void";
    case Rule::LockOnEmpty: return "lock-on-empty";
  }
  return "unknown";
}

py::array_t<std::uint8_t> level_to_array(const Level& level) {
  py::array_t<std::uint8_t> out({kBoardSize, kBoardSize, kLayerCount});
  auto view = out.mutable_unchecked<3>();
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      for (Layer layer : kAllLayers) {
        view(r, c, static_cast<int>(layer)) = level.at(r, c).get(layer) ? 1 : 0;
      }
    }
  }
  return out;
}

RawLevelTensor tensor_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 3 || a.shape(0) != kBoardSize || a.shape(1) != kBoardSize ||
      a.shape(2) != kLayerCount) {
    throw FormatError("expected an array of shape (9, 9, 6)");
  }
  return RawLevelTensor::from_flat(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())));
}

py::dict summary_dict(const Summary& s) {
  py::dict d;
  d["min"] = s.min;
  d["q1"] = s.q1;
  d["median"] = s.median;
  d["q3"] = s.q3;
  d["max"] = s.max;
  d["mean"] = s.mean;
  return d;
}

}  // namespace

PYBIND11_MODULE(_m3gen, m) {
  m.doc() = "Match-three level generation with local and global MRFs";
  m.attr("__version__") = kVersion;

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<FormatError>(m, "FormatError", error.ptr());
  py::register_exception<SpecError>(m, "SpecError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());

  py::class_<CellState>(m, "CellState")
      .def(py::init([](bool shape, bool regular, bool special, bool block, bool jelly, bool lock) {
             return CellState{shape, regular, special, block, jelly, lock};
           }),
           py::arg("shape") = false, py::arg("regular") = false, py::arg("special") = false,
           py::arg("block") = false, py::arg("jelly") = false, py::arg("lock") = false)
      .def_readwrite("shape", &CellState::shape)
      .def_readwrite("regular", &CellState::regular)
      .def_readwrite("special", &CellState::special)
      .def_readwrite("block", &CellState::block)
      .def_readwrite("jelly", &CellState::jelly)
      .def_readwrite("lock", &CellState::lock)
      .def_property_readonly("is_void", &CellState::is_void)
      .def_property_readonly("is_valid", &CellState::is_valid)
      .def_property_readonly("tile", [](const CellState& c) { return collapse(c).value(); })
      .def_static("from_tile", [](int value) { return expand(TileId::from_value(value)); })
      .def(py::self == py::self)
      .def("__repr__", [](const CellState& c) {
        std::string s = "CellState(";
        bool first = true;
        for (Layer layer : kAllLayers) {
          if (!c.get(layer)) continue;
          s += std::string(first ? "" : ", ") + layer_name(layer) + "=True";
          first = false;
        }
        return s + ")";
      });

  py::class_<Level>(m, "Level")
      .def(py::init<>())
      .def("__getitem__", [](const Level& l, std::pair<int, int> rc) {
        if (!Level::on_board(rc.first, rc.second)) throw py::index_error("cell out of range");
        return l.at(rc.first, rc.second);
      })
      .def("__setitem__", [](Level& l, std::pair<int, int> rc, const CellState& cell) {
        if (!Level::on_board(rc.first, rc.second)) throw py::index_error("cell out of range");
        l.at(rc.first, rc.second) = cell;
      })
      .def("to_array", &level_to_array, "9x9x6 uint8 array of layer flags")
      .def_static("from_array", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
        // Exact 0/1 input round-trips; anything else goes through repair.
        return postprocess(tensor_from_array(a));
      })
      .def("__str__", &render_text)
      .def(py::self == py::self)
      .def(py::pickle([](const Level& l) { return encode(l); },
                      [](const std::string& text) { return decode(text); }));

  m.def("validate", [](const Level& level) {
    py::list out;
    for (const auto& v : validate(level)) {
      out.append(py::make_tuple(v.pos.row, v.pos.col, rule_name(v.rule)));
    }
    return out;
  }, "List of (row, col, rule) for every broken cell rule");
  m.def("postprocess", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return postprocess(tensor_from_array(a));
  }, py::arg("tensor"));
  m.def("mirror_complete", [](const Level& l, const std::string& axis) {
    return mirror_complete(l, parse_axis(axis));
  }, py::arg("level"), py::arg("axis") = "vertical");
  m.def("reflect", [](const Level& l, const std::string& axis) {
    return reflect(l, parse_axis(axis));
  });

  m.def("vertical_symmetry", &vertical_symmetry);
  m.def("horizontal_symmetry", &horizontal_symmetry);
  m.def("diagonal_symmetry", &diagonal_symmetry);
  m.def("symmetry", [](const Level& l, const std::string& axis) {
    return symmetry(l, parse_axis(axis));
  });
  m.def("cluster_score", [](const Level& l, bool block, bool lock) {
    return cluster_score(l, {block, lock});
  }, py::arg("level"), py::arg("block") = true, py::arg("lock") = true);
  m.def("report", [](const std::vector<Level>& levels) {
    const SymmetryReport rep = report(levels);
    py::dict d;
    d["vertical"] = summary_dict(rep.vertical);
    d["horizontal"] = summary_dict(rep.horizontal);
    d["diagonal"] = summary_dict(rep.diagonal);
    d["cluster"] = summary_dict(rep.cluster);
    py::list per_level;
    for (const auto& s : rep.per_level) {
      py::dict row;
      row["vertical"] = s.vertical;
      row["horizontal"] = s.horizontal;
      row["diagonal"] = s.diagonal;
      row["cluster"] = s.cluster;
      per_level.append(row);
    }
    d["per_level"] = per_level;
    return d;
  });
  m.def("select_by_quantile", [](const std::vector<Level>& levels, const std::string& axis,
                                 const std::string& picks) {
    py::list out;
    for (const auto& s : select_by_quantile(levels, parse_axis(axis), parse_picks(picks))) {
      out.append(py::make_tuple(pick_name(s.pick), s.index, s.score));
    }
    return out;
  }, py::arg("levels"), py::arg("axis") = "vertical", py::arg("picks") = "min,median,max");

  py::class_<CorpusSpec>(m, "CorpusSpec")
      .def(py::init<>())
      .def_readwrite("count", &CorpusSpec::count)
      .def_readwrite("seed", &CorpusSpec::seed)
      .def_property("symmetry",
                    [](const CorpusSpec& s) {
                      return std::string(s.symmetry ? axis_name(*s.symmetry) : "none");
                    },
                    [](CorpusSpec& s, const std::string& name) { s.symmetry = parse_symmetry(name); })
      .def_readwrite("strength", &CorpusSpec::strength)
      .def_property("tile_weights",
                    [](const CorpusSpec& s) {
                      const auto& w = s.tile_weights;
                      return py::make_tuple(w.empty, w.regular, w.special, w.block);
                    },
                    [](CorpusSpec& s, std::tuple<double, double, double, double> w) {
                      s.tile_weights = {std::get<0>(w), std::get<1>(w), std::get<2>(w),
                                        std::get<3>(w)};
                    })
      .def_readwrite("jelly_rate", &CorpusSpec::jelly_rate)
      .def_readwrite("lock_rate", &CorpusSpec::lock_rate)
      .def_readwrite("local_pattern_rate", &CorpusSpec::local_pattern_rate)
      .def_property("mask", [](const CorpusSpec& s) { return s.mask.to_string(); },
                    [](CorpusSpec& s, const std::string& text) { s.mask = BoardMask::parse(text); })
      .def("validate", &CorpusSpec::validate);

  m.def("synthesize", &synthesize, py::arg("spec"));
  m.def("filter_by_symmetry", [](const std::vector<Level>& levels, const std::string& axis,
                                 double min_score) {
    return filter_by_symmetry(levels, parse_axis(axis), min_score);
  }, py::arg("levels"), py::arg("axis") = "vertical", py::arg("min_score") = 1.0);

  py::class_<Cpd>(m, "Cpd")
      .def_property_readonly("neighborhood",
                             [](const Cpd& c) { return neighborhood_name(c.kind()); })
      .def_property_readonly("full_contexts", [](const Cpd& c) { return c.table_size(Tier::Full); })
      .def("lookup", [](const Cpd& c, const std::vector<Token>& key) {
        const Categorical p = c.lookup(key);
        py::dict dist;
        for (std::size_t t = 0; t < kTileSpace; ++t) {
          if (p.probabilities[t] > 0) dist[py::int_(t)] = p.probabilities[t];
        }
        return py::make_tuple(tier_name(p.tier), dist);
      }, "(tier, {tile: probability}) for a key of neighbor tokens")
      .def("encode", &Cpd::encode)
      .def_static("decode", [](const std::string& text) { return Cpd::decode(text); })
      .def(py::self == py::self);

  m.def("train", [](const std::vector<Level>& levels, const std::string& neighborhood) {
    return train(levels, parse_neighborhood(neighborhood));
  }, py::arg("levels"), py::arg("neighborhood") = "global");

  auto make_config = [](int sweeps, const std::string& scan, std::uint64_t seed,
                        const std::string& init) {
    SamplerConfig config{sweeps, parse_scan(scan), seed, parse_init(init)};
    config.validate();
    return config;
  };
  m.def("sample", [make_config](const Cpd& cpd, std::uint64_t seed, int sweeps,
                                const std::string& scan, const std::string& init) {
    py::gil_scoped_release release;
    return sample(cpd, make_config(sweeps, scan, seed, init));
  }, py::arg("cpd"), py::arg("seed") = 0, py::arg("sweeps") = 50, py::arg("scan") = "random",
        py::arg("init") = "marginal");
  m.def("sample_many", [make_config](const Cpd& cpd, std::size_t count, std::uint64_t seed,
                                     int sweeps, const std::string& scan, const std::string& init) {
    py::gil_scoped_release release;
    return sample_many(cpd, make_config(sweeps, scan, seed, init), count);
  }, py::arg("cpd"), py::arg("count"), py::arg("seed") = 0, py::arg("sweeps") = 50,
        py::arg("scan") = "random", py::arg("init") = "marginal");

  m.def("encode", [](const Level& l) { return encode(l); });
  m.def("decode", [](const std::string& text) { return decode(text); });
  m.def("encode_corpus", [](const std::vector<Level>& levels) {
    return encode_corpus({levels, nlohmann::ordered_json::object()});
  });
  m.def("decode_corpus", [](const std::string& text) { return decode_corpus(text).levels; });
  m.def("load_corpus", [](const std::string& path) { return load_corpus(path); });
  m.def("save_corpus", [](const std::vector<Level>& levels, const std::string& path) {
    save_corpus(levels, path);
  });
  m.def("encode_tensors", [](const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& arrays) {
    std::vector<RawLevelTensor> tensors;
    for (const auto& a : arrays) tensors.push_back(tensor_from_array(a));
    return encode_tensors(tensors);
  }, "Raw tensor file text accepted by `m3gen postprocess`");
  m.def("render_text", &render_text);
  m.def("render_svg", &render_svg);
}
