#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rcms/bytes.hpp"

namespace rcms::sim {

enum class MessageKind {
  Beacon,
  AuthReq,
  AuthResp,
  AssocReq,
  AssocResp,
  EapIdentityReq,
  EapIdentityResp,
  EapMethodOffer,
  EapMethodNak,
  TunnelHello,
  TunnelCert,
  TunnelKeyExchange,
  TunnelData,
  EapSuccess,
  EapFailure,
  HandshakeMsg,  // 4-way handshake; payload "step" is 1..4
};

std::string_view kind_name(MessageKind kind);

using Payload = std::map<std::string, std::string>;

struct Message {
  std::uint64_t seq = 0;
  std::string from;
  std::string to;
  MessageKind kind;
  Payload payload;
};

// One secret spotted somewhere it can be read: in a wire payload (cleartext,
// so any listener has it) or in an actor's decrypted-record view.
struct Sighting {
  std::string secret;
  std::string via;       // "wire" or "endpoint"
  std::string observer;  // actor id for endpoint sightings, "*" for wire
  std::uint64_t seq = 0;
};

struct LeakageReport {
  std::vector<std::string> secrets;  // names of everything that was tracked
  std::vector<Sighting> sightings;

  std::size_t wire_count() const;
  std::size_t endpoint_count(const std::set<std::string>& observers) const;
  // Wire sightings plus endpoint sightings at any of the given actors:
  // everything a (passively sniffing) adversary controlling them learned.
  std::size_t count_reaching(const std::set<std::string>& adversaries) const;
};

// Ordered record of every simulated frame, per-actor views of tunneled
// plaintext, and the registry of secret byte strings to scan for.
class Transcript {
 public:
  // The returned reference stays valid as later messages are posted.
  const Message& post(std::string from, std::string to, MessageKind kind, Payload payload);

  // An actor authored or decrypted this tunneled record; it now knows the
  // plaintext. seq ties it to the carrying wire message.
  void observe(const std::string& actor, std::uint64_t seq, const Payload& record);

  void register_secret(std::string name, Bytes value);

  const std::deque<Message>& messages() const { return messages_; }
  const std::vector<std::pair<std::uint64_t, Payload>>* view_of(const std::string& actor) const;

  std::string to_jsonl() const;
  LeakageReport leakage() const;

 private:
  std::deque<Message> messages_;
  std::map<std::string, std::vector<std::pair<std::uint64_t, Payload>>> views_;
  std::vector<std::pair<std::string, Bytes>> secrets_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace rcms::sim
