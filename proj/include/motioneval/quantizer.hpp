#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace motioneval {

// A codebook of equal-dimension entries, one per row of its CSV source.
struct Codebook {
    std::size_t dim = 0;
    std::vector<std::vector<double>> entries;

    std::size_t size() const { return entries.size(); }
};

// Parses one codebook entry per line, values comma-separated, '#' comments
// and blank lines skipped. All rows must share one dimension.
Codebook parse_codebook_csv(const std::string& text);
std::string write_codebook_csv(const Codebook& book);

// Index (1-based) of the codebook entry nearest to z in squared Euclidean
// distance; ties resolve to the lowest index.
std::size_t nearest_code(const Codebook& book, std::span<const double> z);

// Training loss of one quantized sample: squared reconstruction error plus
// (1 + beta) times the squared distance between the encoding and its chosen
// codebook entry. Forward-only evaluation, so the two commitment terms
// collapse into one weighted distance.
double vq_loss(std::span<const double> raw, std::span<const double> reconstructed,
               std::span<const double> encoding, std::span<const double> code,
               double beta);

} // namespace motioneval
