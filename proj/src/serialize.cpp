#include "contest/serialize.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

using nlohmann::json;

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  std::string line = "id";
  for (int j = 1; j <= data.d(); ++j) line += ",x" + std::to_string(j);
  line += ",y\n";
  out << line;
  for (int i = 0; i < data.n(); ++i) {
    line = std::to_string(i + 1);
    for (int j = 0; j < data.d(); ++j) {
      line += ',';
      line += data.x(i, j) ? '1' : '0';
    }
    line += ',';
    line += data.y[i] ? '1' : '0';
    line += '\n';
    out << line;
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("dataset: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  const int d = static_cast<int>(header.size()) - 2;
  if (d < 1 || header.front() != "id" || header.back() != "y")
    throw ParseError("dataset line 1: header must be id,x1,...,xd,y");
  for (int j = 1; j <= d; ++j)
    if (header[j] != "x" + std::to_string(j))
      throw ParseError("dataset line 1, column " + std::to_string(j + 1) + ": expected x" +
                       std::to_string(j) + ", found '" + header[j] + "'");

  std::vector<std::uint8_t> x, y;
  int line_no = 1, rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (static_cast<int>(fields.size()) != d + 2)
      throw ParseError("dataset line " + std::to_string(line_no) + ": expected " +
                       std::to_string(d + 2) + " fields, found " + std::to_string(fields.size()));
    for (int c = 1; c <= d + 1; ++c) {
      const auto& f = fields[c];
      if (f != "0" && f != "1")
        throw ParseError("dataset line " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + " (" + header[c] + "): value '" + f +
                         "' is not 0 or 1");
      (c <= d ? x : y).push_back(f == "1" ? 1 : 0);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("dataset: no data rows");
  Dataset data;
  data.x.rows = rows;
  data.x.cols = d;
  data.x.data = std::move(x);
  data.y = std::move(y);
  return data;
}

void write_latent_csv(const BinaryMatrix& confounders, std::ostream& out) {
  out << "id";
  for (int j = 1; j <= confounders.cols; ++j) out << ",c" << j;
  out << '\n';
  for (int i = 0; i < confounders.rows; ++i) {
    out << i + 1;
    for (int j = 0; j < confounders.cols; ++j) out << ',' << int{confounders(i, j)};
    out << '\n';
  }
}

std::string truth_to_json(const GroundTruth& truth, std::string_view salt) {
  json j;
  j["schema_version"] = kTruthSchemaVersion;
  j["seed"] = truth.seed;
  j["k"] = truth.k();
  json relevant = json::array();
  for (int index : truth.relevant)
    relevant.push_back({{"index", index}, {"log_or", truth.effects.at(index)}});
  j["relevant"] = relevant;
  json confounders = json::array();
  for (const auto& c : truth.confounders)
    confounders.push_back({{"linked", c.linked}, {"log_or", c.log_or}, {"prevalence", c.prevalence}});
  j["confounders"] = confounders;
  j["prevalences"] = truth.prevalences;
  if (!salt.empty()) j["salt"] = std::string(salt);
  return j.dump();
}

SealedTruth truth_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kTruthSchemaVersion)
      throw ParseError("truth: unsupported schema_version");
    SealedTruth out;
    out.truth.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& r : j.at("relevant")) {
      const int index = r.at("index").get<int>();
      out.truth.relevant.push_back(index);
      out.truth.effects[index] = r.at("log_or").get<double>();
    }
    for (const auto& c : j.at("confounders"))
      out.truth.confounders.push_back(
          {c.at("log_or").get<double>(), c.at("linked").get<std::vector<int>>(),
           c.at("prevalence").get<double>()});
    out.truth.prevalences = j.at("prevalences").get<std::vector<double>>();
    if (j.contains("salt")) out.salt = j.at("salt").get<std::string>();
    if (j.at("k").get<int>() != out.truth.k()) throw ParseError("truth: k does not match relevant");
    if (out.truth.effects.size() != out.truth.relevant.size())
      throw ParseError("truth: duplicate relevant index");
    if (!std::is_sorted(out.truth.relevant.begin(), out.truth.relevant.end()))
      throw ParseError("truth: relevant indices must be ascending");
    for (int index : out.truth.relevant)
      if (index < 1 || index > out.truth.d()) throw ParseError("truth: relevant index out of range");
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("truth: ") + e.what());
  }
}

std::string submission_to_json(const Submission& s) {
  json j;
  j["team"] = s.team;
  j["selected"] = s.selected;
  j["method_report"] = s.method_report;
  return j.dump(2) + "\n";
}

Submission submission_from_text(std::string_view text, const std::string& fallback_team) {
  std::size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  if (first < text.size() && text[first] == '{') {
    try {
      const json j = json::parse(text);
      Submission s;
      s.team = j.at("team").get<std::string>();
      s.selected = j.at("selected").get<std::vector<int>>();
      if (j.contains("method_report")) s.method_report = j.at("method_report").get<std::string>();
      return s;
    } catch (const json::exception& e) {
      throw ParseError("submission: " + std::string(e.what()));
    }
  }
  Submission s;
  s.team = fallback_team;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParseError("submission '" + fallback_team + "': '" + token + "' is not an index");
    s.selected.push_back(v);
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path);
}

}  // namespace contest
