#pragma once

#include <cmath>
#include <cstring>

#include "carla/nn/core.hpp"
#include "carla/rng.hpp"

namespace carla::nn {

using Index = Eigen::Index;

// Temporal convolution with "same" padding over (C, B*L) activations
// (column index = b*L + t). Implemented as im2col + one GEMM per call;
// the im2col buffer is recomputed in backward instead of cached.
template <typename T>
class Conv1d {
public:
    Conv1d() = default;
    Conv1d(std::string name, Index in_ch, Index out_ch, Index kernel)
        : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel), pad_left_((kernel - 1) / 2) {
        w_.init_shape(name + ".w", out_ch, in_ch * kernel);
        b_.init_shape(name + ".b", out_ch, 1);
    }

    void init(RandomSource& rng) {
        const double stddev = std::sqrt(2.0 / static_cast<double>(in_ch_ * kernel_));
        for (Index i = 0; i < w_.value.size(); ++i) w_.value.data()[i] = static_cast<T>(rng.normal(0.0, stddev));
        b_.value.setZero();
    }

    Index out_channels() const { return out_ch_; }

    const T* forward(const T* x, Index batch, Index len) {
        auto col = im2col(x, batch, len);
        auto y = y_buf_.map(out_ch_, batch * len);
        y.noalias() = w_.value * col;
        y.colwise() += b_.value.col(0);
        return y.data();
    }

    // dx may be null for the first layer.
    void backward(const T* x, const T* dy, Index batch, Index len, T* dx) {
        const Index n = batch * len;
        ConstMatrixMap<T> dy_m(dy, out_ch_, n);
        {
            auto col = im2col(x, batch, len);
            w_.grad.noalias() += dy_m * col.transpose();
            b_.grad.col(0).noalias() += dy_m.rowwise().sum();
        }
        if (!dx) return;
        auto dcol = dcol_buf_.map(in_ch_ * kernel_, n);
        dcol.noalias() = w_.value.transpose() * dy_m;
        MatrixMap<T> dx_m(dx, in_ch_, n);
        dx_m.setZero();
#pragma omp parallel for schedule(static)
        for (Index b = 0; b < batch; ++b) {
            for (Index c = 0; c < in_ch_; ++c) {
                for (Index k = 0; k < kernel_; ++k) {
                    const Index shift = k - pad_left_;
                    const Index t0 = std::max<Index>(0, -shift);
                    const Index t1 = std::min<Index>(len, len - shift);
                    if (t1 <= t0) continue;
                    dx_m.row(c).segment(b * len + t0 + shift, t1 - t0) +=
                        dcol.row(c * kernel_ + k).segment(b * len + t0, t1 - t0);
                }
            }
        }
    }

    void for_each_param(const ParamVisitor<T>& visit) {
        visit(w_);
        visit(b_);
    }

private:
    MatrixMap<T> im2col(const T* x, Index batch, Index len) {
        ConstMatrixMap<T> x_m(x, in_ch_, batch * len);
        auto col = col_buf_.map(in_ch_ * kernel_, batch * len);
#pragma omp parallel for schedule(static)
        for (Index b = 0; b < batch; ++b) {
            for (Index c = 0; c < in_ch_; ++c) {
                for (Index k = 0; k < kernel_; ++k) {
                    const Index shift = k - pad_left_; // source t offset
                    const Index t0 = std::max<Index>(0, -shift);
                    const Index t1 = std::min<Index>(len, len - shift);
                    auto row = col.row(c * kernel_ + k);
                    if (t0 > 0) row.segment(b * len, t0).setZero();
                    if (t1 < len) row.segment(b * len + t1, len - t1).setZero();
                    if (t1 > t0)
                        std::memcpy(&row(b * len + t0), &x_m(c, b * len + t0 + shift),
                                    static_cast<std::size_t>(t1 - t0) * sizeof(T));
                }
            }
        }
        return col;
    }

    Index in_ch_ = 0, out_ch_ = 0, kernel_ = 0, pad_left_ = 0;
    Param<T> w_, b_;
    Buffer<T> col_buf_, dcol_buf_, y_buf_;
};

// Per-channel batch normalization over (C, B*L). Training mode uses batch
// statistics (population variance) and keeps an EMA of them for eval mode.
template <typename T>
class BatchNorm1d {
public:
    BatchNorm1d() = default;
    BatchNorm1d(std::string name, Index channels) : name_(std::move(name)), channels_(channels) {
        gamma_.init_shape(name_ + ".gamma", channels, 1);
        beta_.init_shape(name_ + ".beta", channels, 1);
        running_mean_.setZero(channels, 1);
        running_var_.setOnes(channels, 1);
    }

    void init(RandomSource&) {
        gamma_.value.setOnes();
        beta_.value.setZero();
        running_mean_.setZero();
        running_var_.setOnes();
    }

    const T* forward(const T* x, Index n, Mode mode) {
        ConstMatrixMap<T> x_m(x, channels_, n);
        auto y = y_buf_.map(channels_, n);
        if (mode == Mode::Train) {
            auto xhat = xhat_buf_.map(channels_, n);
            if (inv_std_.size() != channels_) inv_std_.setZero(channels_, 1);
#pragma omp parallel for schedule(static)
            for (Index c = 0; c < channels_; ++c) {
                const T mean = x_m.row(c).mean();
                const T var = (x_m.row(c).array() - mean).square().mean();
                const T inv = T(1) / std::sqrt(var + kEps);
                inv_std_(c, 0) = inv;
                xhat.row(c) = (x_m.row(c).array() - mean) * inv;
                y.row(c) = xhat.row(c) * gamma_.value(c, 0) + MatrixMap<T>::Scalar(beta_.value(c, 0));
                running_mean_(c, 0) = (T(1) - kMomentum) * running_mean_(c, 0) + kMomentum * mean;
                running_var_(c, 0) = (T(1) - kMomentum) * running_var_(c, 0) + kMomentum * var;
            }
        } else {
#pragma omp parallel for schedule(static)
            for (Index c = 0; c < channels_; ++c) {
                const T inv = T(1) / std::sqrt(running_var_(c, 0) + kEps);
                y.row(c) = (x_m.row(c).array() - running_mean_(c, 0)) * inv * gamma_.value(c, 0) + beta_.value(c, 0);
            }
        }
        return y.data();
    }

    // Valid only after a Train-mode forward.
    void backward(const T* dy, Index n, T* dx) {
        ConstMatrixMap<T> dy_m(dy, channels_, n);
        auto xhat = xhat_buf_.map(channels_, n);
        MatrixMap<T> dx_m(dx, channels_, n);
#pragma omp parallel for schedule(static)
        for (Index c = 0; c < channels_; ++c) {
            const T sum_dy = dy_m.row(c).sum();
            const T sum_dy_xhat = dy_m.row(c).cwiseProduct(xhat.row(c)).sum();
            gamma_.grad(c, 0) += sum_dy_xhat;
            beta_.grad(c, 0) += sum_dy;
            const T scale = gamma_.value(c, 0) * inv_std_(c, 0) / static_cast<T>(n);
            dx_m.row(c) = (dy_m.row(c).array() * static_cast<T>(n) - sum_dy - xhat.row(c).array() * sum_dy_xhat) * scale;
        }
    }

    void for_each_param(const ParamVisitor<T>& visit) {
        visit(gamma_);
        visit(beta_);
    }

    // Running statistics are serialized state, not learnable parameters.
    template <typename Visitor>
    void for_each_state(Visitor&& visit) {
        visit(name_ + ".running_mean", running_mean_);
        visit(name_ + ".running_var", running_var_);
    }

private:
    static constexpr T kEps = T(1e-5);
    static constexpr T kMomentum = T(0.1);

    std::string name_;
    Index channels_ = 0;
    Param<T> gamma_, beta_;
    Matrix<T> running_mean_, running_var_, inv_std_;
    Buffer<T> y_buf_, xhat_buf_;
};

template <typename T>
inline void relu_inplace(T* x, Index n) {
    MatrixMap<T>(x, 1, n) = MatrixMap<T>(x, 1, n).cwiseMax(T(0));
}

// dx = dy where the *output* y was positive; dy and dx may alias.
template <typename T>
inline void relu_backward(const T* y, const T* dy, Index n, T* dx) {
    for (Index i = 0; i < n; ++i) dx[i] = y[i] > T(0) ? dy[i] : T(0);
}

// Fully connected layer over (B, F) feature activations.
template <typename T>
class Dense {
public:
    Dense() = default;
    Dense(std::string name, Index in, Index out, double init_std = 0.0)
        : in_(in), out_(out), init_std_(init_std > 0.0 ? init_std : std::sqrt(2.0 / static_cast<double>(in))) {
        w_.init_shape(name + ".w", out, in);
        b_.init_shape(name + ".b", out, 1);
    }

    void init(RandomSource& rng) {
        for (Index i = 0; i < w_.value.size(); ++i) w_.value.data()[i] = static_cast<T>(rng.normal(0.0, init_std_));
        b_.value.setZero();
    }

    Index out_features() const { return out_; }

    const T* forward(const T* x, Index batch) {
        ConstMatrixMap<T> x_m(x, batch, in_);
        auto y = y_buf_.map(batch, out_);
        y.noalias() = x_m * w_.value.transpose();
        y.rowwise() += b_.value.col(0).transpose();
        return y.data();
    }

    void backward(const T* x, const T* dy, Index batch, T* dx) {
        ConstMatrixMap<T> x_m(x, batch, in_);
        ConstMatrixMap<T> dy_m(dy, batch, out_);
        w_.grad.noalias() += dy_m.transpose() * x_m;
        b_.grad.col(0).noalias() += dy_m.colwise().sum().transpose();
        if (!dx) return;
        MatrixMap<T> dx_m(dx, batch, in_);
        dx_m.noalias() = dy_m * w_.value;
    }

    void for_each_param(const ParamVisitor<T>& visit) {
        visit(w_);
        visit(b_);
    }

private:
    Index in_ = 0, out_ = 0;
    double init_std_ = 0.0;
    Param<T> w_, b_;
    Buffer<T> y_buf_;
};

// Global average pooling over time: (C, B*L) -> (B, C).
template <typename T>
class GlobalAvgPool {
public:
    const T* forward(const T* x, Index channels, Index batch, Index len) {
        ConstMatrixMap<T> x_m(x, channels, batch * len);
        auto y = y_buf_.map(batch, channels);
#pragma omp parallel for schedule(static)
        for (Index b = 0; b < batch; ++b)
            for (Index c = 0; c < channels; ++c) y(b, c) = x_m.row(c).segment(b * len, len).mean();
        return y.data();
    }

    void backward(const T* dy, Index channels, Index batch, Index len, T* dx) {
        ConstMatrixMap<T> dy_m(dy, batch, channels);
        MatrixMap<T> dx_m(dx, channels, batch * len);
        const T scale = T(1) / static_cast<T>(len);
#pragma omp parallel for schedule(static)
        for (Index b = 0; b < batch; ++b)
            for (Index c = 0; c < channels; ++c) dx_m.row(c).segment(b * len, len).setConstant(dy_m(b, c) * scale);
    }

private:
    Buffer<T> y_buf_;
};

// Row-wise softmax over (B, C) logits.
template <typename T>
inline void softmax_rows(const T* z, Index batch, Index classes, T* p) {
    ConstMatrixMap<T> z_m(z, batch, classes);
    MatrixMap<T> p_m(p, batch, classes);
    for (Index b = 0; b < batch; ++b) {
        const T zmax = z_m.row(b).maxCoeff();
        p_m.row(b) = (z_m.row(b).array() - zmax).exp();
        p_m.row(b) /= p_m.row(b).sum();
    }
}

// dz for a softmax row given dL/dp: dz = p .* (dp - dot(dp, p)).
template <typename T>
inline void softmax_backward_rows(const T* p, const T* dp, Index batch, Index classes, T* dz) {
    ConstMatrixMap<T> p_m(p, batch, classes);
    ConstMatrixMap<T> dp_m(dp, batch, classes);
    MatrixMap<T> dz_m(dz, batch, classes);
    for (Index b = 0; b < batch; ++b) {
        const T dot = dp_m.row(b).cwiseProduct(p_m.row(b)).sum();
        dz_m.row(b) = p_m.row(b).cwiseProduct(dp_m.row(b).array() - dot);
    }
}

} // namespace carla::nn
