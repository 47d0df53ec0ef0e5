// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <thread>

#include "granule/core/error.hpp"
#include "granule/transport/mailbox.hpp"

using namespace granule;
using transport::Envelope;
using transport::Mailbox;
using transport::MessageKind;

namespace {

std::vector<std::uint8_t> bytes(std::initializer_list<std::uint8_t> list) {
  return std::vector<std::uint8_t>(list);
}

}  // namespace

TEST_CASE("send / exchange / recv delivers the same bytes") {
  Mailbox mailbox(2);
  mailbox.send(0, 1, MessageKind::GhostCreate, bytes({1, 2, 3}));
  mailbox.exchange();
  const auto inbox = mailbox.recv(1);
  REQUIRE(inbox.size() == 1);
  CHECK(inbox[0].sender == 0);
  CHECK(inbox[0].kind == MessageKind::GhostCreate);
  CHECK(inbox[0].payload == bytes({1, 2, 3}));
  CHECK(mailbox.recv(0).empty());
}

TEST_CASE("two sends on the same pair arrive in order") {
  Mailbox mailbox(2);
  mailbox.send(0, 1, MessageKind::GhostUpdate, bytes({1}));
  mailbox.send(0, 1, MessageKind::GhostRemove, bytes({2}));
  mailbox.exchange();
  const auto inbox = mailbox.recv(1);
  REQUIRE(inbox.size() == 2);
  CHECK(inbox[0].kind == MessageKind::GhostUpdate);
  CHECK(inbox[1].kind == MessageKind::GhostRemove);
}

TEST_CASE("inboxes group messages by ascending sender rank") {
  Mailbox mailbox(3);
  for (Rank from = 0; from < 3; ++from)
    for (Rank to = 0; to < 3; ++to)
      if (from != to)
        mailbox.send(from, to, MessageKind::GhostCreate,
                     bytes({static_cast<std::uint8_t>(from)}));
  mailbox.exchange();
  for (Rank to = 0; to < 3; ++to) {
    const auto inbox = mailbox.recv(to);
    REQUIRE(inbox.size() == 2);
    CHECK(inbox[0].sender < inbox[1].sender);
    CHECK(inbox[0].payload[0] == inbox[0].sender);
  }
}

TEST_CASE("empty and repeated exchanges deliver nothing") {
  Mailbox mailbox(2);
  mailbox.exchange();
  CHECK(mailbox.recv(0).empty());
  CHECK(mailbox.recv(1).empty());

  mailbox.send(0, 1, MessageKind::Migrate, bytes({9}));
  mailbox.exchange();
  CHECK(mailbox.recv(1).size() == 1);
  mailbox.exchange();  // nothing queued since
  CHECK(mailbox.recv(1).empty());
}

TEST_CASE("invalid ranks and self-sends are rejected") {
  Mailbox mailbox(2);
  CHECK_THROWS_AS(mailbox.send(0, 2, MessageKind::GhostCreate, {}), Error);
  CHECK_THROWS_AS(mailbox.send(-1, 0, MessageKind::GhostCreate, {}), Error);
  CHECK_THROWS_AS(mailbox.send(1, 1, MessageKind::GhostCreate, {}), Error);
  CHECK_THROWS_AS(mailbox.recv(5), Error);
  CHECK_THROWS_AS(Mailbox(0), Error);
}

TEST_CASE("stats count payload bytes only, per kind") {
  Mailbox mailbox(3);
  mailbox.send(0, 1, MessageKind::GhostCreate, bytes({1, 2, 3, 4}));
  mailbox.send(0, 2, MessageKind::GhostCreate, bytes({1, 2}));
  mailbox.send(1, 2, MessageKind::GhostUpdate, bytes({1}));
  mailbox.send(2, 0, MessageKind::GhostRemove, {});

  const auto stats = mailbox.stats().snapshot();
  CHECK(stats.messagesFor(MessageKind::GhostCreate) == 2);
  CHECK(stats.bytesFor(MessageKind::GhostCreate) == 6);  // envelope excluded
  CHECK(stats.messagesFor(MessageKind::GhostUpdate) == 1);
  CHECK(stats.bytesFor(MessageKind::GhostUpdate) == 1);
  CHECK(stats.messagesFor(MessageKind::GhostRemove) == 1);
  CHECK(stats.bytesFor(MessageKind::GhostRemove) == 0);
  CHECK(stats.totalBytes() == 7);

  // conservation: everything sent is received, nothing else
  mailbox.exchange();
  std::size_t received = 0;
  for (Rank r = 0; r < 3; ++r)
    for (const auto& envelope : mailbox.recv(r)) received += envelope.payload.size();
  CHECK(received == 7);

  mailbox.stats().reset();
  CHECK(mailbox.stats().snapshot().totalBytes() == 0);
}

TEST_CASE("fixed send sequences produce identical transcripts") {
  const auto transcript = [] {
    Mailbox mailbox(3);
    for (int round = 0; round < 5; ++round) {
      mailbox.send(0, 1, MessageKind::GhostCreate,
                   bytes({static_cast<std::uint8_t>(round)}));
      mailbox.send(2, 1, MessageKind::GhostUpdate,
                   bytes({static_cast<std::uint8_t>(round * 2)}));
      mailbox.send(1, 0, MessageKind::OwnerChanged, bytes({7}));
    }
    mailbox.exchange();
    std::vector<std::uint8_t> log;
    for (Rank r = 0; r < 3; ++r)
      for (const auto& envelope : mailbox.recv(r)) {
        log.push_back(static_cast<std::uint8_t>(envelope.sender));
        log.push_back(static_cast<std::uint8_t>(envelope.kind));
        log.insert(log.end(), envelope.payload.begin(), envelope.payload.end());
      }
    return log;
  };
  CHECK(transcript() == transcript());
}

TEST_CASE("concurrent sends from distinct ranks are safe and complete") {
  Mailbox mailbox(4);
  {
    std::vector<std::jthread> threads;
    for (Rank from = 0; from < 4; ++from)
      threads.emplace_back([&mailbox, from] {
        for (int k = 0; k < 100; ++k)
          for (Rank to = 0; to < 4; ++to)
            if (to != from)
              mailbox.send(from, to, MessageKind::GhostUpdate, bytes({1, 2}));
      });
  }
  mailbox.exchange();
  std::size_t total = 0;
  for (Rank r = 0; r < 4; ++r) total += mailbox.recv(r).size();
  CHECK(total == 4 * 3 * 100);
  CHECK(mailbox.stats().snapshot().messagesFor(MessageKind::GhostUpdate) ==
        4 * 3 * 100);
  CHECK(mailbox.stats().snapshot().bytesFor(MessageKind::GhostUpdate) ==
        4 * 3 * 100 * 2);
}
