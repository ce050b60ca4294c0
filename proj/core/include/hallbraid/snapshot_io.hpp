#ifndef HALLBRAID_SNAPSHOT_IO_HPP
#define HALLBRAID_SNAPSHOT_IO_HPP

#include <string>

#include "hallbraid/model.hpp"
#include "hallbraid/spectral_field.hpp"

namespace hallbraid {

// Text snapshot format "HALLBRAID-SNAP v1": a short key=value header (grid
// sizes, time, model parameters, config hash) followed by one record per
// stored non-redundant mode, "m n re im" with 17 significant digits, sorted
// by (n, m).  Only m >= 0 is written; the m < 0 half is implied by the
// conjugate pairing.  Reading back reproduces the field bit for bit.
void write_snapshot(const std::string& path, const SpectralField& c,
                    const ModelParams& p, const std::string& config_hash);

SpectralField read_snapshot(const std::string& path,
                            ModelParams* params_out = nullptr,
                            std::string* hash_out = nullptr);

struct LoadedField {
  SpectralField field;
  double removed_mean = 0.0;  // the constant y-mean stripped on ingestion
};

// Reads either a snapshot file or a whitespace grid-sample table
// "x y value" covering the full collocation grid.  Grid tables may carry a
// constant y-mean, which is stripped and reported; an x-dependent y-mean is
// rejected (MeanModeError).
LoadedField load_initial_condition(const std::string& path);

// 17-significant-digit decimal formatting used by every text emitter; this
// is the precision at which doubles round-trip exactly.
std::string format_full(double v);

}  // namespace hallbraid

#endif
