#pragma once

// Offline snapshot and price files.
//
// Snapshot CSV:  token_a,token_b,reserve_a,reserve_b[,fee_rate]
// Prices CSV:    token,usd_price
//
// JSON equivalents are arrays of objects with the same field names. A file is
// read as JSON when its name ends in ".json" or its first non-blank character
// is '['. Loading is all-or-nothing: every bad record is collected into one
// DataError with its line (CSV) or record index (JSON).

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arb/amm.hpp"
#include "arb/prices.hpp"

namespace arb {

struct SnapshotOptions {
  /// Fee for records without a fee_rate value.
  double default_fee = kDefaultFeeRate;
  /// When set, replaces every record's fee.
  std::optional<double> fee_override;
};

std::vector<Pool> load_snapshot(const std::filesystem::path& path, const SnapshotOptions& options = {});
std::vector<Pool> parse_snapshot(std::istream& in, const std::string& source,
                                 const SnapshotOptions& options = {});

PriceTable load_prices(const std::filesystem::path& path);
PriceTable parse_prices(std::istream& in, const std::string& source);

/// Reserves and fees are written in shortest round-trip form, so reloading
/// reproduces them bit for bit.
void write_snapshot_csv(std::ostream& out, std::span<const Pool> pools);
void write_snapshot_json(std::ostream& out, std::span<const Pool> pools);
void write_prices_csv(std::ostream& out, const PriceTable& prices);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

}  // namespace arb
