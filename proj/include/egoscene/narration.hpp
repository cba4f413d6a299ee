#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egoscene/relations.hpp"

namespace egoscene {

/// One edge of a trail: walked from `from` to `to`, rendered from `relation`
/// (which keeps the stored subject/object orientation).
struct TrailStep {
  SegmentId from = 0;
  SegmentId to = 0;
  Relation relation;
};

using Trail = std::vector<TrailStep>;

/// Covers every relation of `adj` exactly once with as few trails as
/// possible: one per connected component when it has 0 or 2 odd vertices,
/// otherwise odd/2. Starts and neighbour choices prefer the lowest id.
std::vector<Trail> euler_trails(const FieldAdjacency& adj);

using CaptionMap = std::map<SegmentId, std::string>;

/// "<subject> is <phrase> <object>." Throws kNotFound for a missing caption.
std::string render_relation(const Relation& rel, const CaptionMap& captions);

std::string_view relation_phrase(RelationKind k) noexcept;
std::string_view field_header(DirectionField f) noexcept;

struct NarrationInput {
  CaptionMap captions;
  // Left, front, right.
  std::array<std::vector<SegmentId>, 3> members;
  std::array<std::vector<Trail>, 3> trails;
  std::optional<SegmentId> ground;
  std::optional<SegmentId> background;
};

struct SceneDescription {
  // Left, front, right; the first line of a non-empty field lists its captions.
  std::array<std::vector<std::string>, 3> field_sentences;
  std::string ground_sentence;
  std::string background_sentence;
  std::string full_text;
};

/// Field sections in left, front, right order, then the ground and background
/// lines. Throws kConsistency when a trail or designation names a segment the
/// input does not know.
SceneDescription compose_scene(const NarrationInput& input);

}  // namespace egoscene
