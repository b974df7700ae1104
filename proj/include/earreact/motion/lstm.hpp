#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "earreact/motion/classifier.hpp"

namespace earreact::motion {

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

/// LSTM layer + dense softmax head. Gate pre-activations are
/// x W_g + h U_g + b_g for g in {i, f, o, c}; the head is relu(h_T) Wd + bd.
struct LstmWeights {
  Matrix Wi, Wf, Wo, Wc;  // input x hidden
  Matrix Ui, Uf, Uo, Uc;  // hidden x hidden
  std::vector<double> bi, bf, bo, bc;  // hidden
  Matrix Wd;              // hidden x 2 (head_motion, non_reaction)
  std::vector<double> bd;  // 2

  /// All-zero weights for the given sizes.
  static LstmWeights zeros(std::size_t input, std::size_t hidden);

  std::size_t input_size() const { return Wi.rows; }
  std::size_t hidden_size() const { return Wi.cols; }

  /// Throws ParameterError on inconsistent shapes or non-finite entries.
  void validate() const;
};

/// Runs the recurrence over `steps` (each of input_size features) from zero
/// hidden and cell state. Dropout is an identity at inference.
MotionProbabilities lstm_forward(const LstmWeights& weights,
                                 std::span<const std::vector<double>> steps);
/// Throws ParameterError unless the weights take 18 inputs.
MotionProbabilities lstm_forward(const LstmWeights& weights, const MotionUnitSeq& seq);

/// JSON with arrays Wi,Wf,Wo,Wc (18x32), Ui,Uf,Uo,Uc (32x32), bi,bf,bo,bc
/// (32), Wd (32x2), bd (2). Matrices may be nested or flat row-major.
/// Throws ParseError when shapes differ from 18/32.
LstmWeights lstm_weights_from_json(const std::string& text);
LstmWeights load_lstm_weights(const std::filesystem::path& path);
std::string lstm_weights_to_json(const LstmWeights& weights);

class LstmClassifier : public SequenceClassifier {
 public:
  explicit LstmClassifier(LstmWeights weights);
  MotionProbabilities classify(const MotionUnitSeq& seq) const override;

 private:
  LstmWeights weights_;
};

}  // namespace earreact::motion
