#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wesma/autoencoder.hpp"
#include "wesma/datagen.hpp"
#include "wesma/denoise.hpp"
#include "wesma/embed.hpp"
#include "wesma/evalkit.hpp"
#include "wesma/textprep.hpp"
#include "wesma/wavelet.hpp"

namespace py = pybind11;

namespace {

std::vector<wesma::Label> to_labels(const std::vector<bool>& is_threat) {
    std::vector<wesma::Label> labels;
    labels.reserve(is_threat.size());
    for (bool threat : is_threat) {
        labels.push_back(threat ? wesma::Label::threat : wesma::Label::legit);
    }
    return labels;
}

// rows: n_samples x n_features -> column-per-example matrix.
wesma::Matrix rows_to_columns(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("need at least one example");
    }
    wesma::Matrix m(rows.front().size(), rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != m.rows) {
            throw std::invalid_argument("ragged data");
        }
        for (std::size_t i = 0; i < m.rows; ++i) {
            m.at(i, j) = rows[j][i];
        }
    }
    return m;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Undecimated wavelet transform, wavelet-shrinkage denoising and the "
              "word-embedded semantic marginal autoencoder pipeline";

    py::class_<wesma::UwtDecomposition>(m, "UwtDecomposition")
        .def_readonly("levels", &wesma::UwtDecomposition::levels)
        .def_readonly("details", &wesma::UwtDecomposition::details)
        .def_readonly("approx", &wesma::UwtDecomposition::approx)
        .def_readonly("filter_name", &wesma::UwtDecomposition::filter_name)
        .def_readonly("boundary", &wesma::UwtDecomposition::boundary);

    m.def("uwt_forward",
          [](const wesma::Signal& x, const std::string& filter, int levels) {
              return wesma::uwt_forward(x, wesma::wavelet_filter(filter), levels);
          },
          py::arg("x"), py::arg("filter") = "haar", py::arg("levels") = 3);
    m.def("uwt_inverse",
          [](const wesma::UwtDecomposition& dec) {
              return wesma::uwt_inverse(dec, wesma::wavelet_filter(dec.filter_name));
          },
          py::arg("decomposition"));
    m.def("max_levels", [](std::size_t n, const std::string& filter) {
        return wesma::max_levels(n, wesma::wavelet_filter(filter));
    });
    m.def("dilated_circular_convolve",
          [](const wesma::Signal& x, const std::vector<double>& taps, std::size_t dilation) {
              return wesma::dilated_circular_convolve(x, taps, dilation);
          });

    m.def("denoise",
          [](const wesma::Signal& x, const std::string& filter, int levels,
             const std::string& rule, std::optional<double> sigma,
             std::optional<double> threshold, std::optional<wesma::Signal> reference) {
              wesma::DenoiseConfig cfg;
              cfg.filter_name = filter;
              cfg.levels = levels;
              cfg.rule = wesma::threshold_rule_from_string(rule);
              cfg.known_sigma = sigma;
              cfg.manual_threshold = threshold;
              const auto [out, report] =
                  wesma::denoise(x, cfg, reference ? &*reference : nullptr);
              py::dict r;
              r["sigma_used"] = report.sigma_used;
              r["threshold_used"] = report.threshold_used;
              r["input_snr_db"] = report.input_snr_db;
              r["output_snr_db"] = report.output_snr_db;
              r["improvement_db"] = report.improvement_db;
              return py::make_tuple(out, r);
          },
          py::arg("x"), py::arg("filter") = "haar", py::arg("levels") = 5,
          py::arg("rule") = "soft", py::arg("sigma") = std::nullopt,
          py::arg("threshold") = std::nullopt, py::arg("reference") = std::nullopt);
    m.def("snr_db", &wesma::snr_db);
    m.def("mad_sigma",
          [](const std::vector<double>& d) { return wesma::mad_sigma(d); });
    m.def("universal_threshold", &wesma::universal_threshold);
    m.def("apply_threshold", [](double c, double t, const std::string& rule) {
        return wesma::apply_threshold(c, t, wesma::threshold_rule_from_string(rule));
    });

    m.def("gen_signal",
          [](const std::string& kind, std::size_t n, std::uint64_t seed) {
              return wesma::gen_signal(wesma::signal_kind_from_string(kind), n, seed);
          },
          py::arg("kind"), py::arg("n"), py::arg("seed") = 0);
    m.def("add_awgn",
          [](const wesma::Signal& x, double target_snr_db, std::uint64_t seed) {
              wesma::NoiseSpec spec;
              spec.target_snr_db = target_snr_db;
              spec.seed = seed;
              return wesma::add_awgn(x, spec);
          },
          py::arg("x"), py::arg("target_snr_db"), py::arg("seed") = 0);

    m.def("normalize", [](const std::string& s) { return wesma::normalize(s); });
    m.def("tokenize", [](const std::string& s) { return wesma::tokenize(s); });

    py::class_<wesma::EmbeddingMatrix>(m, "EmbeddingMatrix")
        .def_readonly("vocab_size", &wesma::EmbeddingMatrix::vocab_size)
        .def_readonly("dim", &wesma::EmbeddingMatrix::dim)
        .def("input_vector", [](const wesma::EmbeddingMatrix& e, std::size_t i) {
            const auto v = e.input_vector(i);
            return std::vector<double>(v.begin(), v.end());
        });
    m.def("cosine_similarity",
          [](const std::vector<double>& u, const std::vector<double>& v) {
              return wesma::cosine_similarity(u, v);
          });

    py::class_<wesma::WesmaModel>(m, "WesmaModel")
        .def_property_readonly("layer_count",
                               [](const wesma::WesmaModel& model) {
                                   return model.layers.size();
                               })
        .def_property_readonly("feature_count", &wesma::WesmaModel::feature_count);

    m.def("fit_wesma",
          [](const std::vector<std::vector<double>>& rows, double drop_prob, int layers,
             double lambda, const std::string& repr_mode) {
              const wesma::Matrix x = rows_to_columns(rows);
              return wesma::stack_fit(x,
                                      wesma::uniform_corruption_profile(x.rows, drop_prob),
                                      layers, lambda,
                                      wesma::repr_mode_from_string(repr_mode));
          },
          py::arg("rows"), py::arg("drop_prob") = 0.3, py::arg("layers") = 1,
          py::arg("lambda_") = 1e-3, py::arg("repr_mode") = "concat");
    m.def("transform", [](const wesma::WesmaModel& model, const std::vector<double>& x) {
        return wesma::transform(model, x);
    });
    m.def("reconstruction_error",
          [](const wesma::WesmaModel& model, const std::vector<double>& x) {
              return wesma::reconstruction_error(model, x);
          });

    m.def("roc_auc",
          [](const std::vector<double>& scores, const std::vector<bool>& is_threat) {
              const auto labels = to_labels(is_threat);
              return wesma::roc_auc(scores, labels);
          });
    m.def("select_threshold",
          [](const std::vector<double>& scores, const std::vector<bool>& is_threat) {
              const auto labels = to_labels(is_threat);
              return wesma::select_threshold(scores, labels);
          });
}
