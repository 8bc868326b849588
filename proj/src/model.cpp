#include "dopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dopt/linalg.hpp"
#include "json.hpp"

namespace dopt {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidIndex: return "InvalidIndex";
    case ErrorCode::kModeViolation: return "ModeViolation";
    case ErrorCode::kDimensionError: return "DimensionError";
    case ErrorCode::kSingularGram: return "SingularGram";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kDegenerateNodes: return "DegenerateNodes";
    case ErrorCode::kInfeasibleRank: return "InfeasibleRank";
    case ErrorCode::kNotRationalized: return "NotRationalized";
    case ErrorCode::kUnreachableCondition: return "UnreachableCondition";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

const char* mode_name(Mode mode) {
  return mode == Mode::kWithRepetitions ? "with_reps" : "without_reps";
}

Mode parse_mode(const std::string& name) {
  if (name == "without_reps") return Mode::kWithoutRepetitions;
  if (name == "with_reps") return Mode::kWithRepetitions;
  throw Error(ErrorCode::kParseError, "unknown mode '" + name + "'");
}

Instance::Instance(std::vector<std::vector<double>> vectors, std::size_t k, Mode mode)
    : n_(vectors.size()), k_(k), mode_(mode) {
  if (n_ == 0) throw Error(ErrorCode::kInvalidParams, "instance needs at least one vector");
  m_ = vectors.front().size();
  if (m_ == 0) throw Error(ErrorCode::kInvalidParams, "vectors must have dimension >= 1");
  if (m_ > linalg::kMaxOrder) {
    throw Error(ErrorCode::kInvalidParams, "dimension exceeds the matrix order cap");
  }
  if (!(n_ >= k_ && k_ >= m_)) {
    throw Error(ErrorCode::kInvalidParams,
                "need n >= k >= m >= 1, got n=" + std::to_string(n_) +
                    " k=" + std::to_string(k_) + " m=" + std::to_string(m_));
  }
  data_.reserve(n_ * m_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (vectors[i].size() != m_) {
      throw Error(ErrorCode::kDimensionError,
                  "vector " + std::to_string(i) + " has wrong dimension");
    }
    for (double v : vectors[i]) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kDimensionError,
                    "vector " + std::to_string(i) + " has a non-finite entry");
      }
      data_.push_back(v);
    }
  }
  if (linalg::numerical_rank(data_, n_, m_) < m_) {
    throw Error(ErrorCode::kInfeasibleRank, "design vectors do not span R^m");
  }
}

std::size_t Design::multiplicity(std::size_t i) const {
  return static_cast<std::size_t>(std::count(members.begin(), members.end(), i));
}

namespace {

double mth_root_of_det(const linalg::SquareMatrix& g) {
  const linalg::Lu<double> lu(g);
  const double det = lu.determinant();
  if (det <= 0.0) return 0.0;
  return std::exp(lu.log_abs_determinant() / static_cast<double>(g.order()));
}

}  // namespace

double objective_of_design(const Instance& inst, std::span<const std::size_t> members) {
  if (members.empty()) throw Error(ErrorCode::kInvalidParams, "design must be nonempty");
  for (std::size_t i : members) {
    if (i >= inst.n()) {
      throw Error(ErrorCode::kInvalidIndex, "index " + std::to_string(i) + " out of range");
    }
  }
  if (inst.mode() == Mode::kWithoutRepetitions) {
    std::vector<std::size_t> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kModeViolation, "duplicate index in a design without repetitions");
    }
  }
  return mth_root_of_det(linalg::gram_of_members(inst, members));
}

double objective_of_weights(const Instance& inst, std::span<const double> x) {
  if (x.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionError, "weight vector length must equal n");
  }
  for (double v : x) {
    if (!(v >= 0.0)) throw Error(ErrorCode::kInvalidParams, "weights must be nonnegative");
  }
  return mth_root_of_det(linalg::gram(inst, x));
}

Design make_design(const Instance& inst, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  Design d;
  d.value = objective_of_design(inst, members);
  d.members = std::move(members);
  return d;
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("instance JSON: ") + e.what());
  }
  try {
    const auto m = j.at("m").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    const Mode mode = parse_mode(j.at("mode").get<std::string>());
    auto vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
    if (vectors.size() != n) {
      throw Error(ErrorCode::kDimensionError, "vectors list length differs from n");
    }
    for (const auto& v : vectors) {
      if (v.size() != m) {
        throw Error(ErrorCode::kDimensionError, "vector length differs from m");
      }
    }
    return Instance(std::move(vectors), k, mode);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("instance JSON: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

std::string instance_to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["m"] = inst.m();
  j["n"] = inst.n();
  j["k"] = inst.k();
  j["mode"] = mode_name(inst.mode());
  auto vectors = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto v = inst.vector(i);
    vectors.push_back(std::vector<double>(v.begin(), v.end()));
  }
  j["vectors"] = std::move(vectors);
  return j.dump() + "\n";
}

}  // namespace dopt
