#pragma once
// Frozen on-disk annotation fixtures: one JSON object per text, keyed by
// the SHA-256 of the text, sharded across files by the first hex digit
// of the key. Replay is byte-stable, so downstream modules are testable
// without any live annotator.

#include <map>
#include <string>

#include "hopadv/annotate.hpp"

namespace hopadv {

class FixtureStore {
 public:
  FixtureStore() = default;

  static FixtureStore load(const std::string& dir);
  // Writes shard-<hex>.json files into dir, creating it if needed.
  void save(const std::string& dir) const;

  void put(const TextAnnotations& ann);
  bool contains(const std::string& textstr) const;
  TextAnnotations get(const std::string& textstr) const;  // throws DataError on miss

  size_t size() const { return entries_.size(); }

 private:
  // ordered map keeps shard serialization deterministic
  std::map<std::string, TextAnnotations> entries_;  // sha256 -> annotations
};

// Read-only replayer over a loaded store. Fully concurrent.
class FixtureProvider : public AnnotationProvider {
 public:
  explicit FixtureProvider(FixtureStore store) : store_(std::move(store)) {}

  std::string name() const override { return "fixture"; }
  TextAnnotations annotate(const std::string& textstr) const override;

 private:
  FixtureStore store_;
};

// JSON (de)serialization of one fixture entry, shared with the shard IO.
std::string annotations_to_json(const TextAnnotations& ann);
TextAnnotations annotations_from_json(const std::string& json_text);

}  // namespace hopadv
