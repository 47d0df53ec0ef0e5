// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <vector>

#include "granule/core/error.hpp"
#include "granule/core/types.hpp"

namespace granule::transport {

/// Wire tag identifying a synchronization message. Encoded as one byte in
/// front of the payload; the envelope byte is not counted by TransferStats.
enum class MessageKind : std::uint8_t {
  GhostCreate = 0,
  GhostUpdate = 1,
  GhostRemove = 2,
  Migrate = 3,
  OwnerChanged = 4,
};

inline constexpr std::size_t kNumMessageKinds = 5;

std::string_view kindName(MessageKind kind);

/// Cumulative message/byte counters per message kind. Byte counts cover
/// payloads only. Counters are atomics so concurrently sending ranks can
/// share one instance; totals are order-independent.
class TransferStats {
 public:
  struct Snapshot {
    std::array<std::uint64_t, kNumMessageKinds> messages{};
    std::array<std::uint64_t, kNumMessageKinds> bytes{};

    std::uint64_t messagesFor(MessageKind kind) const {
      return messages[static_cast<std::size_t>(kind)];
    }
    std::uint64_t bytesFor(MessageKind kind) const {
      return bytes[static_cast<std::size_t>(kind)];
    }
    std::uint64_t totalBytes() const {
      std::uint64_t sum = 0;
      for (const auto b : bytes) sum += b;
      return sum;
    }
    Snapshot operator-(const Snapshot& earlier) const {
      Snapshot d;
      for (std::size_t k = 0; k < kNumMessageKinds; ++k) {
        d.messages[k] = messages[k] - earlier.messages[k];
        d.bytes[k] = bytes[k] - earlier.bytes[k];
      }
      return d;
    }
  };

  void record(MessageKind kind, std::size_t payloadBytes) {
    const auto k = static_cast<std::size_t>(kind);
    messages_[k].fetch_add(1, std::memory_order_relaxed);
    bytes_[k].fetch_add(payloadBytes, std::memory_order_relaxed);
  }

  Snapshot snapshot() const {
    Snapshot s;
    for (std::size_t k = 0; k < kNumMessageKinds; ++k) {
      s.messages[k] = messages_[k].load(std::memory_order_relaxed);
      s.bytes[k] = bytes_[k].load(std::memory_order_relaxed);
    }
    return s;
  }

  void reset() {
    for (std::size_t k = 0; k < kNumMessageKinds; ++k) {
      messages_[k].store(0, std::memory_order_relaxed);
      bytes_[k].store(0, std::memory_order_relaxed);
    }
  }

 private:
  std::array<std::atomic<std::uint64_t>, kNumMessageKinds> messages_{};
  std::array<std::atomic<std::uint64_t>, kNumMessageKinds> bytes_{};
};

struct Envelope {
  Rank sender = kInvalidRank;
  MessageKind kind = MessageKind::GhostCreate;
  std::vector<std::uint8_t> payload;
};

/// Deterministic in-process transport with BSP superstep semantics: sends
/// queue into per-(sender, receiver) outboxes, exchange() delivers everything
/// at once, grouped per receiver by ascending sender rank and in send order
/// within a pair.
///
/// Concurrency: distinct sender ranks may call send() concurrently (they
/// touch disjoint queues); exchange() and recv() require all senders
/// quiescent. A purely sequential driver is equally supported.
class Mailbox {
 public:
  explicit Mailbox(Rank numRanks);

  Rank numRanks() const { return numRanks_; }

  /// Queues a message. Self-sends and invalid ranks are errors.
  void send(Rank from, Rank to, MessageKind kind,
            std::vector<std::uint8_t> payload);

  /// Delivers all queued messages into the receivers' inboxes; outboxes are
  /// empty afterwards. Barrier contract: no rank may be mid-send.
  void exchange();

  /// Drains and returns this rank's inbox in delivery order.
  std::vector<Envelope> recv(Rank rank);

  TransferStats& stats() { return stats_; }
  const TransferStats& stats() const { return stats_; }

 private:
  void checkRank(Rank rank) const;

  Rank numRanks_;
  // wire bytes (1-byte kind tag + payload) per ordered (sender, receiver) pair
  std::vector<std::vector<std::vector<std::uint8_t>>> queues_;
  std::vector<std::vector<Envelope>> inboxes_;
  TransferStats stats_;
};

}  // namespace granule::transport
