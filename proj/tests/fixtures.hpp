// Synthesized work-delivery games shared by several test files.
#pragma once

#include <map>
#include <memory>

#include "gr1kit/arena.hpp"
#include "gr1kit/gr1.hpp"
#include "gr1kit/workdelivery.hpp"

namespace testsupport {

struct WdGame {
  gr1kit::workdelivery::Params params;
  gr1kit::speclang::SpecDocument doc;
  gr1kit::arena::GameArena arena;
  gr1kit::gr1::SynthesisResult result;
  gr1kit::gr1::Strategy strategy;
};

/// Paper defaults with a fixed initial backlog; synthesized once per value.
inline const WdGame& wd_game(int bl_init) {
  static std::map<int, std::unique_ptr<WdGame>> cache;
  auto& slot = cache[bl_init];
  if (!slot) {
    slot = std::make_unique<WdGame>();
    slot->params.blInitLo = slot->params.blInitHi = bl_init;
    slot->doc = gr1kit::workdelivery::emit_spec(slot->params);
    slot->arena = gr1kit::arena::build_arena(slot->doc);
    slot->result = gr1kit::gr1::solve(slot->arena, slot->doc);
    slot->strategy = gr1kit::gr1::extract_strategy(slot->result, slot->arena);
  }
  return *slot;
}

}  // namespace testsupport
