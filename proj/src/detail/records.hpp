#pragma once

// Messages are batched per destination; a payload is a sequence of records
// [kind << 48 | field_count, fields...].

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "palmpc/engine.hpp"

namespace palmpc::detail {

using engine::MachineId;
using engine::Word;

enum class Rec : Word {
  Block = 1,      // s_begin, letters
  LetterChunk,    // s_begin, letters
  Pieces,         // seg_begin, then (k, values[layers]) per window start k
  StoreFragment,  // class, values
  ChainRequest,   // tag, suffix start, window count
  ChainReply,     // tag, values
  LetterRequest,  // tag, S' begin, S' end
  LetterReply,    // tag, letters held by the sender, in S' order
  Best,           // start, length
};

inline constexpr int kKindShift = 48;

/// Query slot and suffix side packed into one field.
inline Word tag(std::size_t slot, std::size_t side) noexcept { return 2 * slot + side; }
inline std::size_t tag_slot(Word t) noexcept { return static_cast<std::size_t>(t / 2); }
inline std::size_t tag_side(Word t) noexcept { return static_cast<std::size_t>(t % 2); }

class Outbox {
 public:
  explicit Outbox(std::size_t machines) : boxes_(machines) {}

  /// Opens a record and returns its buffer; append fields with push().
  std::vector<Word>& open(MachineId to, Rec kind) {
    std::vector<Word>& box = boxes_.at(to);
    box.push_back(static_cast<Word>(kind) << kKindShift);
    open_to_ = to;
    open_at_ = box.size();
    return box;
  }
  void close() {
    std::vector<Word>& box = boxes_[open_to_];
    box[open_at_ - 1] |= box.size() - open_at_;
  }

  void put(MachineId to, Rec kind, std::initializer_list<Word> fields) {
    std::vector<Word>& box = open(to, kind);
    box.insert(box.end(), fields);
    close();
  }
  template <class T>
  void put(MachineId to, Rec kind, std::initializer_list<Word> head, std::span<const T> body) {
    std::vector<Word>& box = open(to, kind);
    box.insert(box.end(), head);
    box.insert(box.end(), body.begin(), body.end());
    close();
  }

  template <class Ctx>
  void flush(Ctx& ctx) {
    for (std::size_t to = 0; to < boxes_.size(); ++to) {
      if (!boxes_[to].empty()) ctx.send(static_cast<MachineId>(to), std::move(boxes_[to]));
      boxes_[to] = {};
    }
  }

 private:
  std::vector<std::vector<Word>> boxes_;
  MachineId open_to_ = 0;
  std::size_t open_at_ = 0;
};

/// Calls f(from, kind, fields) for every record in the inbox, in order.
template <class F>
void for_each_record(std::span<const engine::Envelope> inbox, F&& f) {
  for (const engine::Envelope& e : inbox) {
    const std::vector<Word>& p = e.payload;
    std::size_t at = 0;
    while (at < p.size()) {
      const auto kind = static_cast<Rec>(p[at] >> kKindShift);
      const std::size_t count = p[at] & ((Word{1} << kKindShift) - 1);
      if (at + 1 + count > p.size()) throw std::logic_error("truncated record");
      f(e.from, kind, std::span<const Word>(p.data() + at + 1, count));
      at += 1 + count;
    }
  }
}

}  // namespace palmpc::detail
