#include "censorlens/imgclf/network.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "censorlens/error.hpp"
#include "censorlens/random.hpp"
#include "censorlens/scores.hpp"

namespace censorlens::imgclf {
namespace {

constexpr int kKernel = 3;
constexpr int kTaps = kKernel * kKernel;

void conv_forward(const Tensor& in, const double* weight, const double* bias, Tensor& out) {
  const int h = in.height, w = in.width;
  for (int o = 0; o < out.channels; ++o) {
    double* dst = &out.values[o * out.plane()];
    std::fill(dst, dst + out.plane(), bias[o]);
    for (int i = 0; i < in.channels; ++i) {
      const double* src = &in.values[i * in.plane()];
      const double* k = weight + (static_cast<std::size_t>(o) * in.channels + i) * kTaps;
      for (int ky = 0; ky < kKernel; ++ky) {
        const int dy = ky - 1;
        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
        for (int kx = 0; kx < kKernel; ++kx) {
          const int dx = kx - 1;
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          const double wv = k[ky * kKernel + kx];
          for (int y = y0; y < y1; ++y) {
            double* row = dst + y * w;
            const double* srow = src + (y + dy) * w + dx;
            for (int x = x0; x < x1; ++x) row[x] += wv * srow[x];
          }
        }
      }
    }
  }
}

/// Accumulates weight/bias gradients and, when `din` is non-null, the input
/// gradient.
void conv_backward(const Tensor& in, const double* weight, const Tensor& dout, double* dweight, double* dbias,
                   Tensor* din) {
  const int h = in.height, w = in.width;
  for (int o = 0; o < dout.channels; ++o) {
    const double* g = &dout.values[o * dout.plane()];
    double sum = 0.0;
    for (std::size_t j = 0; j < dout.plane(); ++j) sum += g[j];
    dbias[o] += sum;
    for (int i = 0; i < in.channels; ++i) {
      const double* src = &in.values[i * in.plane()];
      double* dsrc = din ? &din->values[i * din->plane()] : nullptr;
      const std::size_t base = (static_cast<std::size_t>(o) * in.channels + i) * kTaps;
      for (int ky = 0; ky < kKernel; ++ky) {
        const int dy = ky - 1;
        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
        for (int kx = 0; kx < kKernel; ++kx) {
          const int dx = kx - 1;
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          const double wv = weight[base + ky * kKernel + kx];
          double acc = 0.0;
          for (int y = y0; y < y1; ++y) {
            const double* grow = g + y * w;
            const double* srow = src + (y + dy) * w + dx;
            for (int x = x0; x < x1; ++x) acc += grow[x] * srow[x];
            if (dsrc) {
              double* drow = dsrc + (y + dy) * w + dx;
              for (int x = x0; x < x1; ++x) drow[x] += wv * grow[x];
            }
          }
          dweight[base + ky * kKernel + kx] += acc;
        }
      }
    }
  }
}

void relu_inplace(Tensor& t) {
  for (auto& v : t.values) v = v > 0.0 ? v : 0.0;
}

Tensor maxpool_forward(const Tensor& in, std::vector<std::uint32_t>& argmax) {
  Tensor out(in.channels, in.height / 2, in.width / 2);
  argmax.assign(out.values.size(), 0);
  std::size_t j = 0;
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x, ++j) {
        std::size_t best = (static_cast<std::size_t>(c) * in.height + 2 * y) * in.width + 2 * x;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const std::size_t idx = (static_cast<std::size_t>(c) * in.height + 2 * y + dy) * in.width + 2 * x + dx;
            if (in.values[idx] > in.values[best]) best = idx;
          }
        }
        out.values[j] = in.values[best];
        argmax[j] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return out;
}

struct ForwardCache {
  std::vector<Tensor> stage_inputs;
  std::vector<Tensor> stage_outputs;
  std::vector<std::vector<std::uint32_t>> pool_argmax;
};

}  // namespace

void Architecture::validate() const {
  if (input_side < 1) throw InvalidArgument("input side must be positive");
  if (channels.empty()) throw InvalidArgument("architecture needs at least one conv stage");
  for (int c : channels) {
    if (c < 1) throw InvalidArgument("conv stage channel counts must be positive");
  }
  const int pools = static_cast<int>(channels.size()) - 1;
  if (pools >= 31 || input_side % (1 << pools) != 0) {
    throw InvalidArgument(fmt::format("input side {} is not divisible by 2^{}", input_side, pools));
  }
}

int Architecture::feature_side() const { return input_side >> (channels.size() - 1); }

ConvNet::ConvNet(Architecture arch, std::uint64_t seed) : arch_(std::move(arch)) {
  arch_.validate();
  std::size_t offset = 0;
  int in = Image::kChannels;
  for (int out : arch_.channels) {
    StageOffsets s;
    s.in = in;
    s.out = out;
    s.weight = offset;
    offset += static_cast<std::size_t>(out) * in * kTaps;
    s.bias = offset;
    offset += out;
    stages_.push_back(s);
    in = out;
  }
  head_w_ = offset;
  offset += kNumCategories * static_cast<std::size_t>(feature_channels());
  head_b_ = offset;
  offset += kNumCategories;
  params_.assign(offset, 0.0);

  Rng rng(mix_seed(seed));
  for (const auto& s : stages_) {
    std::normal_distribution<double> he(0.0, std::sqrt(2.0 / (s.in * kTaps)));
    for (std::size_t j = 0; j < static_cast<std::size_t>(s.out) * s.in * kTaps; ++j) params_[s.weight + j] = he(rng);
  }
  std::normal_distribution<double> xavier(0.0, std::sqrt(2.0 / (feature_channels() + kNumCategories)));
  for (std::size_t j = head_w_; j < head_b_; ++j) params_[j] = xavier(rng);
}

std::span<double> ConvNet::conv_weight(std::size_t stage) {
  const auto& s = stages_.at(stage);
  return std::span(params_).subspan(s.weight, static_cast<std::size_t>(s.out) * s.in * kTaps);
}

std::span<double> ConvNet::conv_bias(std::size_t stage) {
  const auto& s = stages_.at(stage);
  return std::span(params_).subspan(s.bias, s.out);
}

std::span<double> ConvNet::head_weight() { return std::span(params_).subspan(head_w_, head_b_ - head_w_); }
std::span<const double> ConvNet::head_weight() const {
  return std::span(params_).subspan(head_w_, head_b_ - head_w_);
}
std::span<double> ConvNet::head_bias() { return std::span(params_).subspan(head_b_, kNumCategories); }
std::span<const double> ConvNet::head_bias() const { return std::span(params_).subspan(head_b_, kNumCategories); }

std::span<const double> ConvNet::head_row(Category c) const {
  const auto k = static_cast<std::size_t>(feature_channels());
  return head_weight().subspan(index_of(c) * k, k);
}

Tensor ConvNet::prepare_input(const Image& image) const {
  if (image.empty()) throw InvalidArgument("cannot classify an empty image");
  const Image boxed = letterbox(image, arch_.input_side);
  Tensor t(Image::kChannels, boxed.height(), boxed.width());
  for (int c = 0; c < Image::kChannels; ++c)
    for (int y = 0; y < boxed.height(); ++y)
      for (int x = 0; x < boxed.width(); ++x) t.at(c, y, x) = boxed.at(y, x, c) / 255.0 - 0.5;
  return t;
}

namespace {

template <typename Stages>
Tensor run_forward(const Stages& stages, const std::vector<double>& params, const Tensor& input, ForwardCache* cache) {
  Tensor x = input;
  std::vector<std::uint32_t> scratch;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto& st = stages[s];
    if (x.channels != st.in) throw InvalidArgument("input tensor channel count does not match the network");
    Tensor a(st.out, x.height, x.width);
    conv_forward(x, &params[st.weight], &params[st.bias], a);
    relu_inplace(a);
    const bool last = s + 1 == stages.size();
    if (cache) cache->stage_inputs.push_back(x);
    if (last) {
      if (cache) cache->stage_outputs.push_back(a);
      return a;
    }
    auto& argmax = cache ? cache->pool_argmax.emplace_back() : scratch;
    x = maxpool_forward(a, argmax);
    if (cache) cache->stage_outputs.push_back(std::move(a));
  }
  return x;
}

}  // namespace

Tensor ConvNet::features(const Tensor& input) const { return run_forward(stages_, params_, input, nullptr); }

std::array<double, kNumCategories> ConvNet::logits(const Tensor& f) const {
  const int k_count = feature_channels();
  if (f.channels != k_count) throw InvalidArgument("feature tensor does not match the head");
  std::array<double, kNumCategories> z{};
  const double inv_area = 1.0 / static_cast<double>(f.plane());
  std::vector<double> pooled(k_count);
  for (int k = 0; k < k_count; ++k) {
    double sum = 0;
    for (std::size_t j = 0; j < f.plane(); ++j) sum += f.values[k * f.plane() + j];
    pooled[k] = sum * inv_area;
  }
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    double acc = params_[head_b_ + c];
    for (int k = 0; k < k_count; ++k) acc += params_[head_w_ + c * k_count + k] * pooled[k];
    z[c] = acc;
  }
  return z;
}

double ConvNet::loss(std::span<const Tensor> inputs, std::span<const Category> labels) const {
  if (inputs.size() != labels.size() || inputs.empty()) throw InvalidArgument("batch size mismatch");
  double total = 0;
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    const auto z = logits(features(inputs[n]));
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0;
    for (double v : z) sum += std::exp(v - zmax);
    total += zmax + std::log(sum) - z[index_of(labels[n])];
  }
  return total / static_cast<double>(inputs.size());
}

double ConvNet::loss_and_gradient(std::span<const Tensor> inputs, std::span<const Category> labels,
                                  std::span<double> grad) const {
  if (inputs.size() != labels.size() || inputs.empty()) throw InvalidArgument("batch size mismatch");
  if (grad.size() != params_.size()) throw InvalidArgument("gradient buffer has the wrong size");
  std::fill(grad.begin(), grad.end(), 0.0);

  const int k_count = feature_channels();
  const double inv_batch = 1.0 / static_cast<double>(inputs.size());
  double total = 0;
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    ForwardCache cache;
    const Tensor f = run_forward(stages_, params_, inputs[n], &cache);
    const auto z = logits(f);
    const ClassScores probs = softmax(z);
    const std::size_t y = index_of(labels[n]);
    total -= std::log(std::max(probs.p[y], 1e-300));

    std::array<double, kNumCategories> dz{};
    for (std::size_t c = 0; c < kNumCategories; ++c) dz[c] = (probs.p[c] - (c == y ? 1.0 : 0.0)) * inv_batch;

    const double inv_area = 1.0 / static_cast<double>(f.plane());
    std::vector<double> pooled(k_count, 0.0);
    for (int k = 0; k < k_count; ++k) {
      for (std::size_t j = 0; j < f.plane(); ++j) pooled[k] += f.values[k * f.plane() + j];
      pooled[k] *= inv_area;
    }
    std::vector<double> dpooled(k_count, 0.0);
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      grad[head_b_ + c] += dz[c];
      for (int k = 0; k < k_count; ++k) {
        grad[head_w_ + c * k_count + k] += dz[c] * pooled[k];
        dpooled[k] += dz[c] * params_[head_w_ + c * k_count + k];
      }
    }

    // Gradient w.r.t. the last stage's post-ReLU output.
    Tensor dact(f.channels, f.height, f.width);
    for (int k = 0; k < k_count; ++k) {
      const double g = dpooled[k] * inv_area;
      std::fill_n(&dact.values[k * dact.plane()], dact.plane(), g);
    }

    for (std::size_t s = stages_.size(); s-- > 0;) {
      const auto& st = stages_[s];
      const Tensor& act = cache.stage_outputs[s];
      for (std::size_t j = 0; j < act.values.size(); ++j) {
        if (act.values[j] <= 0.0) dact.values[j] = 0.0;
      }
      const Tensor& in = cache.stage_inputs[s];
      if (s == 0) {
        conv_backward(in, &params_[st.weight], dact, &grad[st.weight], &grad[st.bias], nullptr);
        break;
      }
      Tensor din(in.channels, in.height, in.width);
      conv_backward(in, &params_[st.weight], dact, &grad[st.weight], &grad[st.bias], &din);
      // Route through the max-pool that produced this stage's input.
      const Tensor& prev = cache.stage_outputs[s - 1];
      Tensor dprev(prev.channels, prev.height, prev.width);
      const auto& argmax = cache.pool_argmax[s - 1];
      for (std::size_t j = 0; j < din.values.size(); ++j) dprev.values[argmax[j]] += din.values[j];
      dact = std::move(dprev);
    }
  }
  return total * inv_batch;
}

}  // namespace censorlens::imgclf
