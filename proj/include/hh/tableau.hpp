#pragma once

#include <cstdint>
#include <vector>

namespace hh {

// Aaronson-Gottesman stabilizer tableau over a local qubit index space.
// Used for the noiseless reference run of the Pauli-frame sampler; random
// measurement outcomes resolve to 0.
class Tableau {
  public:
    explicit Tableau(std::size_t n);

    void h(std::size_t q);
    void x(std::size_t q);
    void cx(std::size_t c, std::size_t t);

    struct MeasureResult {
        std::uint8_t value = 0;
        bool random = false;
    };
    MeasureResult measure_z(std::size_t q);
    MeasureResult measure_x(std::size_t q);
    void reset_z(std::size_t q);
    void reset_x(std::size_t q);

  private:
    std::size_t n_;
    // rows 0..n-1 destabilizers, n..2n-1 stabilizers
    std::vector<std::vector<std::uint8_t>> xb_, zb_;
    std::vector<std::uint8_t> r_;

    void rowsum(std::size_t h, std::size_t i);
    int g_phase(int x1, int z1, int x2, int z2) const;
};

}  // namespace hh
