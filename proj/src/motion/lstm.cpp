#include "earreact/motion/lstm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "earreact/core/errors.hpp"
#include "json.hpp"

namespace earreact::motion {

using nlohmann::json;

namespace {

constexpr std::size_t kHidden = 32;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_matrix(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
  if (m.rows != rows || m.cols != cols || m.data.size() != rows * cols) {
    throw ParameterError(std::string("LSTM weight ") + name + " has wrong shape");
  }
  for (double v : m.data) {
    if (!std::isfinite(v)) throw ParameterError(std::string("LSTM weight ") + name + " not finite");
  }
}

void check_vector(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) throw ParameterError(std::string("LSTM bias ") + name + " has wrong length");
  for (double x : v) {
    if (!std::isfinite(x)) throw ParameterError(std::string("LSTM bias ") + name + " not finite");
  }
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const char* name) {
  Matrix m(rows, cols);
  std::vector<double> flat;
  if (!j.is_array()) throw ParseError(std::string(name) + " must be an array");
  if (!j.empty() && j.front().is_array()) {
    if (j.size() != rows) throw ParseError(std::string(name) + " has wrong row count");
    for (const auto& row : j) {
      const auto r = row.get<std::vector<double>>();
      if (r.size() != cols) throw ParseError(std::string(name) + " has wrong column count");
      flat.insert(flat.end(), r.begin(), r.end());
    }
  } else {
    flat = j.get<std::vector<double>>();
    if (flat.size() != rows * cols) throw ParseError(std::string(name) + " has wrong size");
  }
  m.data = std::move(flat);
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    rows.push_back(std::vector<double>(m.data.begin() + static_cast<std::ptrdiff_t>(r * m.cols),
                                       m.data.begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols)));
  }
  return rows;
}

}  // namespace

LstmWeights LstmWeights::zeros(std::size_t input, std::size_t hidden) {
  LstmWeights w;
  for (Matrix* m : {&w.Wi, &w.Wf, &w.Wo, &w.Wc}) *m = Matrix(input, hidden);
  for (Matrix* m : {&w.Ui, &w.Uf, &w.Uo, &w.Uc}) *m = Matrix(hidden, hidden);
  for (auto* b : {&w.bi, &w.bf, &w.bo, &w.bc}) b->assign(hidden, 0.0);
  w.Wd = Matrix(hidden, 2);
  w.bd.assign(2, 0.0);
  return w;
}

void LstmWeights::validate() const {
  const std::size_t d = input_size();
  const std::size_t h = hidden_size();
  if (d == 0 || h == 0) throw ParameterError("LSTM weights are empty");
  check_matrix(Wi, d, h, "Wi");
  check_matrix(Wf, d, h, "Wf");
  check_matrix(Wo, d, h, "Wo");
  check_matrix(Wc, d, h, "Wc");
  check_matrix(Ui, h, h, "Ui");
  check_matrix(Uf, h, h, "Uf");
  check_matrix(Uo, h, h, "Uo");
  check_matrix(Uc, h, h, "Uc");
  check_vector(bi, h, "bi");
  check_vector(bf, h, "bf");
  check_vector(bo, h, "bo");
  check_vector(bc, h, "bc");
  check_matrix(Wd, h, 2, "Wd");
  check_vector(bd, 2, "bd");
}

MotionProbabilities lstm_forward(const LstmWeights& w, std::span<const std::vector<double>> steps) {
  w.validate();
  const std::size_t d = w.input_size();
  const std::size_t hsize = w.hidden_size();
  std::vector<double> h(hsize, 0.0);
  std::vector<double> c(hsize, 0.0);
  std::vector<double> gi(hsize), gf(hsize), go(hsize), gc(hsize);

  for (const auto& x : steps) {
    if (x.size() != d) throw ParameterError("LSTM input step has wrong width");
    for (std::size_t k = 0; k < hsize; ++k) {
      gi[k] = w.bi[k];
      gf[k] = w.bf[k];
      go[k] = w.bo[k];
      gc[k] = w.bc[k];
    }
    for (std::size_t j = 0; j < d; ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      for (std::size_t k = 0; k < hsize; ++k) {
        gi[k] += xj * w.Wi(j, k);
        gf[k] += xj * w.Wf(j, k);
        go[k] += xj * w.Wo(j, k);
        gc[k] += xj * w.Wc(j, k);
      }
    }
    for (std::size_t j = 0; j < hsize; ++j) {
      const double hj = h[j];
      if (hj == 0.0) continue;
      for (std::size_t k = 0; k < hsize; ++k) {
        gi[k] += hj * w.Ui(j, k);
        gf[k] += hj * w.Uf(j, k);
        go[k] += hj * w.Uo(j, k);
        gc[k] += hj * w.Uc(j, k);
      }
    }
    for (std::size_t k = 0; k < hsize; ++k) {
      c[k] = sigmoid(gf[k]) * c[k] + sigmoid(gi[k]) * std::tanh(gc[k]);
      h[k] = sigmoid(go[k]) * std::tanh(c[k]);
    }
  }

  double logits[2] = {w.bd[0], w.bd[1]};
  for (std::size_t k = 0; k < hsize; ++k) {
    const double r = std::max(0.0, h[k]);
    logits[0] += r * w.Wd(k, 0);
    logits[1] += r * w.Wd(k, 1);
  }
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m);
  const double e1 = std::exp(logits[1] - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

MotionProbabilities lstm_forward(const LstmWeights& weights, const MotionUnitSeq& seq) {
  if (weights.input_size() != kFeatures) throw ParameterError("LSTM weights must take 18 features");
  std::vector<std::vector<double>> steps;
  steps.reserve(kUnits);
  for (std::size_t u = 0; u < kUnits; ++u) {
    const auto unit = seq.unit(u);
    steps.emplace_back(unit.begin(), unit.end());
  }
  return lstm_forward(weights, steps);
}

LstmWeights lstm_weights_from_json(const std::string& text) {
  LstmWeights w;
  try {
    const json j = json::parse(text);
    w.Wi = matrix_from_json(j.at("Wi"), kFeatures, kHidden, "Wi");
    w.Wf = matrix_from_json(j.at("Wf"), kFeatures, kHidden, "Wf");
    w.Wo = matrix_from_json(j.at("Wo"), kFeatures, kHidden, "Wo");
    w.Wc = matrix_from_json(j.at("Wc"), kFeatures, kHidden, "Wc");
    w.Ui = matrix_from_json(j.at("Ui"), kHidden, kHidden, "Ui");
    w.Uf = matrix_from_json(j.at("Uf"), kHidden, kHidden, "Uf");
    w.Uo = matrix_from_json(j.at("Uo"), kHidden, kHidden, "Uo");
    w.Uc = matrix_from_json(j.at("Uc"), kHidden, kHidden, "Uc");
    w.bi = j.at("bi").get<std::vector<double>>();
    w.bf = j.at("bf").get<std::vector<double>>();
    w.bo = j.at("bo").get<std::vector<double>>();
    w.bc = j.at("bc").get<std::vector<double>>();
    w.Wd = matrix_from_json(j.at("Wd"), kHidden, 2, "Wd");
    w.bd = j.at("bd").get<std::vector<double>>();
    w.validate();
  } catch (const json::exception& e) {
    throw ParseError(std::string("LSTM weights: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(std::string("LSTM weights: ") + e.what());
  }
  return w;
}

LstmWeights load_lstm_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return lstm_weights_from_json(ss.str());
}

std::string lstm_weights_to_json(const LstmWeights& w) {
  json j;
  j["Wi"] = matrix_to_json(w.Wi);
  j["Wf"] = matrix_to_json(w.Wf);
  j["Wo"] = matrix_to_json(w.Wo);
  j["Wc"] = matrix_to_json(w.Wc);
  j["Ui"] = matrix_to_json(w.Ui);
  j["Uf"] = matrix_to_json(w.Uf);
  j["Uo"] = matrix_to_json(w.Uo);
  j["Uc"] = matrix_to_json(w.Uc);
  j["bi"] = w.bi;
  j["bf"] = w.bf;
  j["bo"] = w.bo;
  j["bc"] = w.bc;
  j["Wd"] = matrix_to_json(w.Wd);
  j["bd"] = w.bd;
  return j.dump() + "\n";
}

LstmClassifier::LstmClassifier(LstmWeights weights) : weights_(std::move(weights)) {
  weights_.validate();
  if (weights_.input_size() != kFeatures) throw ParameterError("LSTM weights must take 18 features");
}

MotionProbabilities LstmClassifier::classify(const MotionUnitSeq& seq) const {
  return lstm_forward(weights_, seq);
}

}  // namespace earreact::motion
