#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "photonstats/photon_stats.hpp"
#include "photonstats/simulation.hpp"
#include "photonstats/wishart.hpp"

namespace photonstats {

struct ParsedModel {
    WishartModel model;
    std::optional<CountModel> count;
};

// Model document: {"d", "p", "sigma": d x d of [re, im], "means": p x d of
// [re, im] (optional), "count_model": {"kind", ...} (optional)}.
// Violations are collected and reported together with paths into the document.
ParsedModel parse_model_json(const std::string& text);
ParsedModel parse_model_file(const std::string& path);

std::string serialize_model(const WishartModel& model,
                            const std::optional<CountModel>& count = std::nullopt);

// Stable hex digest of the canonical serialized form.
std::string model_digest(const WishartModel& model);

// One numeric column (1-based) from CSV or plain lines; '#' lines and an
// optional non-numeric header row are skipped.
std::vector<double> read_sample_column(std::istream& in, int column);
std::vector<double> read_sample_file(const std::string& path, int column);

void write_batch_csv(const SampleBatch& batch, std::ostream& out);
SampleBatch read_batch_csv(std::istream& in);

}  // namespace photonstats
