// Copyright 2026 The Dexmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEXMAP_CONTACTS_IO_HPP_
#define DEXMAP_CONTACTS_IO_HPP_

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "dexmap/force_closure.hpp"
#include "dexmap/jsonl.hpp"

namespace dexmap {

// Contact-set file: one grasp per line,
//   {"grasp_id": "...", "contacts": [{"p": [m], "n": [unit], "mu": x?}]}
// Per-contact mu falls back to the caller's default when absent. When used
// as per-frame input to `annotate`, grasp_id is the source frame index.

struct ContactSet {
  std::string grasp_id;
  std::vector<Contact> contacts;
};

struct ContactFile {
  std::vector<ContactSet> sets;
  std::vector<std::string> errors;
};

inline ContactFile read_contact_sets(std::istream& in, double default_mu) {
  ContactFile file;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = jsonl::parse_line(line, line_number);
      ContactSet set;
      const auto& id = jsonl::require_field(j, "grasp_id", line_number);
      set.grasp_id = id.is_string() ? id.get<std::string>() : id.dump();
      const auto& contacts = jsonl::require_field(j, "contacts", line_number);
      if (!contacts.is_array()) {
        throw InputError("line " + std::to_string(line_number) +
                         ": 'contacts' must be an array");
      }
      for (const auto& jc : contacts) {
        Contact c;
        c.p = jsonl::as_vector3(jsonl::require_field(jc, "p", line_number),
                                "p", line_number);
        c.n = jsonl::as_vector3(jsonl::require_field(jc, "n", line_number),
                                "n", line_number);
        c.mu = jc.contains("mu") ? jc["mu"].get<double>() : default_mu;
        if (c.mu < 0.0) {
          throw NegativeFriction("line " + std::to_string(line_number) +
                                 ": negative friction coefficient");
        }
        set.contacts.push_back(c);
      }
      file.sets.push_back(std::move(set));
    } catch (const InputError& e) {
      file.errors.push_back(e.what());
    } catch (const nlohmann::json::exception& e) {
      file.errors.push_back("line " + std::to_string(line_number) + ": " +
                            e.what());
    }
  }
  return file;
}

/// Verdict output line: {"grasp_id", "closed", "margin", "rank"}.
inline std::string verdict_line(const std::string& grasp_id,
                                const ClosureVerdict& verdict) {
  std::string out = "{\"grasp_id\":";
  jsonl::append_quoted(out, grasp_id);
  out += ",\"closed\":";
  out += verdict.closed ? "true" : "false";
  out += ",\"margin\":";
  out += jsonl::format_double(verdict.margin);
  out += ",\"rank\":";
  out += std::to_string(verdict.rank);
  out += '}';
  return out;
}

}  // namespace dexmap

#endif  // DEXMAP_CONTACTS_IO_HPP_
