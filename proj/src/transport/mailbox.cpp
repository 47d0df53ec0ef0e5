// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/transport/mailbox.hpp"

#include <string>
#include <utility>

namespace granule::transport {

std::string_view kindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::GhostCreate: return "GHOST_CREATE";
    case MessageKind::GhostUpdate: return "GHOST_UPDATE";
    case MessageKind::GhostRemove: return "GHOST_REMOVE";
    case MessageKind::Migrate: return "MIGRATE";
    case MessageKind::OwnerChanged: return "OWNER_CHANGED";
  }
  return "?";
}

Mailbox::Mailbox(Rank numRanks) : numRanks_(numRanks) {
  if (numRanks < 1) throw Error("mailbox needs at least one rank");
  queues_.resize(static_cast<std::size_t>(numRanks) * numRanks);
  inboxes_.resize(static_cast<std::size_t>(numRanks));
}

void Mailbox::checkRank(Rank rank) const {
  if (rank < 0 || rank >= numRanks_)
    throw Error("invalid rank " + std::to_string(rank));
}

void Mailbox::send(Rank from, Rank to, MessageKind kind,
                   std::vector<std::uint8_t> payload) {
  checkRank(from);
  checkRank(to);
  if (from == to) throw Error("self-send from rank " + std::to_string(from));

  stats_.record(kind, payload.size());

  // 1-byte kind tag in front of the payload.
  std::vector<std::uint8_t> wire;
  wire.reserve(payload.size() + 1);
  wire.push_back(static_cast<std::uint8_t>(kind));
  wire.insert(wire.end(), payload.begin(), payload.end());

  queues_[static_cast<std::size_t>(from) * numRanks_ + to].push_back(
      std::move(wire));
}

void Mailbox::exchange() {
  for (Rank to = 0; to < numRanks_; ++to) {
    auto& inbox = inboxes_[static_cast<std::size_t>(to)];
    for (Rank from = 0; from < numRanks_; ++from) {
      auto& queue = queues_[static_cast<std::size_t>(from) * numRanks_ + to];
      for (auto& wire : queue) {
        Envelope envelope;
        envelope.sender = from;
        envelope.kind = static_cast<MessageKind>(wire.front());
        envelope.payload.assign(wire.begin() + 1, wire.end());
        inbox.push_back(std::move(envelope));
      }
      queue.clear();
    }
  }
}

std::vector<Envelope> Mailbox::recv(Rank rank) {
  checkRank(rank);
  return std::exchange(inboxes_[static_cast<std::size_t>(rank)], {});
}

}  // namespace granule::transport
