#include "arb/market_data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "arb/errors.hpp"

namespace arb {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = line.find(',', pos);
    fields.push_back(trim(std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::optional<double> parse_real(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool looks_like_json(std::istream& in, const std::string& source) {
  if (source.size() >= 5 && source.compare(source.size() - 5, 5, ".json") == 0) return true;
  in >> std::ws;
  return in.peek() == '[';
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError({path.string() + ": cannot open file"});
  return in;
}

struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, fields)
  bool header_ok = false;
};

CsvTable read_csv(std::istream& in, const std::string& source, std::vector<std::string>& problems,
                  std::span<const std::string_view> required) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = split_csv(content);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) table.columns.emplace(fields[i], i);
      for (std::string_view name : required) {
        if (!table.columns.count(std::string(name))) {
          problems.push_back(source + ":" + std::to_string(line_no) + ": header lacks column '" +
                             std::string(name) + "'");
        }
      }
      have_header = true;
      table.header_ok = problems.empty();
      continue;
    }
    if (fields.size() != table.columns.size()) {
      problems.push_back(source + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(table.columns.size()) + " fields, found " +
                         std::to_string(fields.size()));
      continue;
    }
    table.rows.emplace_back(line_no, std::move(fields));
  }
  if (!have_header) problems.push_back(source + ": missing header line");
  return table;
}

// One snapshot record, wherever it came from. `where` prefixes messages.
void add_pool(std::vector<Pool>& pools, std::vector<std::string>& problems, const std::string& where,
              const std::string& token_a, const std::string& token_b, std::optional<double> reserve_a,
              std::optional<double> reserve_b, std::optional<double> fee, bool fee_present,
              const SnapshotOptions& options) {
  std::vector<std::string> local;
  if (token_a.empty() || token_b.empty()) local.push_back("token identifiers must be non-empty");
  if (!token_a.empty() && token_a == token_b) local.push_back("pool pairs token " + token_a + " with itself");
  if (!reserve_a) {
    local.push_back("reserve_a is not a finite number");
  } else if (!(*reserve_a > 0.0)) {
    local.push_back("reserve_a must be positive");
  }
  if (!reserve_b) {
    local.push_back("reserve_b is not a finite number");
  } else if (!(*reserve_b > 0.0)) {
    local.push_back("reserve_b must be positive");
  }
  if (fee_present && !fee) local.push_back("fee_rate is not a finite number");
  if (fee && !(*fee >= 0.0 && *fee < 1.0)) local.push_back("fee_rate must lie in [0, 1)");
  if (!local.empty()) {
    for (auto& msg : local) problems.push_back(where + ": " + msg);
    return;
  }
  const double rate = options.fee_override ? *options.fee_override : fee.value_or(options.default_fee);
  pools.emplace_back(TokenId(token_a), TokenId(token_b), *reserve_a, *reserve_b, rate);
}

std::vector<Pool> parse_snapshot_csv(std::istream& in, const std::string& source,
                                     const SnapshotOptions& options) {
  static constexpr std::string_view kRequired[] = {"token_a", "token_b", "reserve_a", "reserve_b"};
  std::vector<std::string> problems;
  const CsvTable table = read_csv(in, source, problems, kRequired);
  std::vector<Pool> pools;
  if (!table.header_ok) throw DataError(std::move(problems));
  const auto fee_col = table.columns.find("fee_rate");
  for (const auto& [line_no, f] : table.rows) {
    const std::string where = source + ":" + std::to_string(line_no);
    std::optional<double> fee;
    bool fee_present = false;
    if (fee_col != table.columns.end() && !f[fee_col->second].empty()) {
      fee_present = true;
      fee = parse_real(f[fee_col->second]);
    }
    add_pool(pools, problems, where, f[table.columns.at("token_a")], f[table.columns.at("token_b")],
             parse_real(f[table.columns.at("reserve_a")]), parse_real(f[table.columns.at("reserve_b")]), fee,
             fee_present, options);
  }
  if (!problems.empty()) throw DataError(std::move(problems));
  return pools;
}

json parse_json_array(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError({source + ": invalid JSON: " + e.what()});
  }
  if (!doc.is_array()) throw DataError({source + ": expected a JSON array of records"});
  return doc;
}

std::string json_string(const json& rec, const char* key) {
  const auto it = rec.find(key);
  return it != rec.end() && it->is_string() ? it->get<std::string>() : std::string();
}

std::optional<double> json_real(const json& rec, const char* key) {
  const auto it = rec.find(key);
  if (it == rec.end() || !it->is_number()) return std::nullopt;
  const double v = it->get<double>();
  return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
}

std::vector<Pool> parse_snapshot_json(std::istream& in, const std::string& source,
                                      const SnapshotOptions& options) {
  const json doc = parse_json_array(in, source);
  std::vector<Pool> pools;
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    const std::string where = source + ": record " + std::to_string(i + 1);
    if (!rec.is_object()) {
      problems.push_back(where + ": not an object");
      continue;
    }
    const bool fee_present = rec.contains("fee_rate") && !rec["fee_rate"].is_null();
    add_pool(pools, problems, where, json_string(rec, "token_a"), json_string(rec, "token_b"),
             json_real(rec, "reserve_a"), json_real(rec, "reserve_b"),
             fee_present ? json_real(rec, "fee_rate") : std::nullopt, fee_present, options);
  }
  if (!problems.empty()) throw DataError(std::move(problems));
  return pools;
}

void add_price(PriceTable& table, std::vector<std::string>& problems, const std::string& where,
               const std::string& token, std::optional<double> price) {
  if (token.empty()) {
    problems.push_back(where + ": token identifier must be non-empty");
    return;
  }
  if (!price) {
    problems.push_back(where + ": usd_price is not a finite number");
    return;
  }
  if (*price < 0.0) {
    problems.push_back(where + ": usd_price must be nonnegative");
    return;
  }
  const TokenId id(token);
  if (table.contains(id)) {
    problems.push_back(where + ": duplicate price for token " + token);
    return;
  }
  table.set(id, *price);
}

}  // namespace

std::vector<Pool> parse_snapshot(std::istream& in, const std::string& source, const SnapshotOptions& options) {
  if (options.fee_override && !(*options.fee_override >= 0.0 && *options.fee_override < 1.0)) {
    throw DomainError("fee override must lie in [0, 1)");
  }
  return looks_like_json(in, source) ? parse_snapshot_json(in, source, options)
                                     : parse_snapshot_csv(in, source, options);
}

std::vector<Pool> load_snapshot(const std::filesystem::path& path, const SnapshotOptions& options) {
  std::ifstream in = open_or_throw(path);
  return parse_snapshot(in, path.string(), options);
}

PriceTable parse_prices(std::istream& in, const std::string& source) {
  PriceTable table;
  std::vector<std::string> problems;
  if (looks_like_json(in, source)) {
    const json doc = parse_json_array(in, source);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::string where = source + ": record " + std::to_string(i + 1);
      if (!doc[i].is_object()) {
        problems.push_back(where + ": not an object");
        continue;
      }
      add_price(table, problems, where, json_string(doc[i], "token"), json_real(doc[i], "usd_price"));
    }
  } else {
    static constexpr std::string_view kRequired[] = {"token", "usd_price"};
    const CsvTable csv = read_csv(in, source, problems, kRequired);
    if (!csv.header_ok) throw DataError(std::move(problems));
    for (const auto& [line_no, f] : csv.rows) {
      add_price(table, problems, source + ":" + std::to_string(line_no), f[csv.columns.at("token")],
                parse_real(f[csv.columns.at("usd_price")]));
    }
  }
  if (!problems.empty()) throw DataError(std::move(problems));
  return table;
}

PriceTable load_prices(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  return parse_prices(in, path.string());
}

std::string format_exact(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_snapshot_csv(std::ostream& out, std::span<const Pool> pools) {
  out << "token_a,token_b,reserve_a,reserve_b,fee_rate\n";
  for (const Pool& p : pools) {
    out << p.token_a().str() << ',' << p.token_b().str() << ',' << format_exact(p.reserve_a()) << ','
        << format_exact(p.reserve_b()) << ',' << format_exact(p.fee_rate()) << '\n';
  }
}

void write_snapshot_json(std::ostream& out, std::span<const Pool> pools) {
  json doc = json::array();
  for (const Pool& p : pools) {
    doc.push_back({{"token_a", p.token_a().str()},
                   {"token_b", p.token_b().str()},
                   {"reserve_a", p.reserve_a()},
                   {"reserve_b", p.reserve_b()},
                   {"fee_rate", p.fee_rate()}});
  }
  out << doc.dump(2) << '\n';
}

void write_prices_csv(std::ostream& out, const PriceTable& prices) {
  out << "token,usd_price\n";
  for (const auto& [token, price] : prices.entries()) out << token.str() << ',' << format_exact(price) << '\n';
}

}  // namespace arb
