#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttcore {

// Agents and objects are numbered 1..n. Agent i is endowed with object i.
using AgentId = std::uint32_t;
using ObjectId = std::uint32_t;

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strict, possibly truncated, rankings of n agents over n objects.
//
// Agent i's list holds distinct object ids, most preferred first. Objects the
// agent does not list are unacceptable, except its own endowment, which is
// always implicitly acceptable just below the listed objects. When
// null_count > 0 the objects n-null_count+1..n are synthetic "null" objects.
//
// The constructor does not check invariants; call validate().
class PreferenceProfile {
 public:
  PreferenceProfile() = default;
  PreferenceProfile(std::size_t n, std::vector<std::vector<ObjectId>> lists,
                    std::size_t null_count = 0)
      : n_(n), lists_(std::move(lists)), null_count_(null_count) {}

  std::size_t size() const { return n_; }
  std::size_t null_count() const { return null_count_; }

  // 1-based agent id.
  const std::vector<ObjectId>& list(AgentId agent) const { return lists_.at(agent - 1); }
  std::span<const std::vector<ObjectId>> lists() const { return lists_; }

  std::size_t max_list_length() const;
  bool is_complete() const;

  bool operator==(const PreferenceProfile&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<ObjectId>> lists_;
  std::size_t null_count_ = 0;
};

// Bijection agent -> object; assignment[i-1] is agent i's object.
struct Allocation {
  std::vector<ObjectId> assignment;

  std::size_t size() const { return assignment.size(); }
  ObjectId of(AgentId agent) const { return assignment.at(agent - 1); }
  bool is_bijection() const;
  bool operator==(const Allocation&) const = default;
};

struct Violation {
  AgentId agent = 0;  // 0 when the violation is not tied to one agent
  std::string rule;
};

std::optional<Violation> validate(const PreferenceProfile& profile);

// Throws ProfileError with the violation text when the profile is invalid.
void require_valid(const PreferenceProfile& profile);

// Each list is the first L entries of an independent uniform permutation of
// 1..n drawn from std::mt19937_64 seeded with `seed`.
PreferenceProfile generate_random(std::size_t n, std::size_t L, std::uint64_t seed);

using UtilityFn = std::function<double(AgentId, ObjectId)>;

// Sorts objects by strictly descending utility. Ties raise ProfileError.
PreferenceProfile generate_from_utility(std::size_t n, const UtilityFn& utility);

// Null placement: for each agent, the 0-based position in its list at which
// the block of null objects is inserted. A position equal to the list length
// ranks every null object last.
struct NullPlacement {
  std::vector<std::size_t> position;

  static NullPlacement last(std::span<const std::vector<ObjectId>> lists);
};

// Pads a market of `lists.size()` agents and `objects` real objects
// (objects < agents) with agents - objects null objects numbered
// objects+1..agents. When objects == agents the lists are returned unchanged.
PreferenceProfile pad_null(std::span<const std::vector<ObjectId>> lists, std::size_t objects,
                           const NullPlacement& placement);

enum class ProfileFormat { json, csv };

ProfileFormat format_from_path(const std::filesystem::path& path);

std::string to_json_string(const PreferenceProfile& profile);
std::string to_csv_string(const PreferenceProfile& profile);
PreferenceProfile parse_json(const std::string& text);
PreferenceProfile parse_csv(const std::string& text);

PreferenceProfile read_profile(const std::filesystem::path& path, ProfileFormat format);
void write_profile(const PreferenceProfile& profile, const std::filesystem::path& path,
                   ProfileFormat format);

}  // namespace ttcore
