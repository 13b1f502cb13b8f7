#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace carla::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using MatrixMap = Eigen::Map<Matrix<T>>;

template <typename T>
using ConstMatrixMap = Eigen::Map<const Matrix<T>>;

enum class Mode { Train, Eval };

// Sets both the OpenMP and Eigen thread pools. All parallel loops use static
// partitions, so results are bit-deterministic for a fixed thread count.
void set_num_threads(int n);
int num_threads();

// Grow-only scratch storage mapped as a row-major matrix. Reusing the backing
// vector avoids reallocating the large im2col/activation buffers every step.
template <typename T>
class Buffer {
public:
    MatrixMap<T> map(Eigen::Index rows, Eigen::Index cols) {
        const auto need = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
        if (store_.size() < need) store_.resize(need);
        return MatrixMap<T>(store_.data(), rows, cols);
    }

private:
    std::vector<T> store_;
};

// One learnable tensor plus its gradient accumulator.
template <typename T>
struct Param {
    std::string name;
    Matrix<T> value;
    Matrix<T> grad;

    void init_shape(std::string n, Eigen::Index rows, Eigen::Index cols) {
        name = std::move(n);
        value.setZero(rows, cols);
        grad.setZero(rows, cols);
    }
    void zero_grad() { grad.setZero(); }
};

template <typename T>
using ParamVisitor = std::function<void(Param<T>&)>;

} // namespace carla::nn
