#include "rcms/sim/message.hpp"

#include <nlohmann/json.hpp>

#include "rcms/crypto.hpp"

namespace rcms::sim {

std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::Beacon:
      return "Beacon";
    case MessageKind::AuthReq:
      return "AuthReq";
    case MessageKind::AuthResp:
      return "AuthResp";
    case MessageKind::AssocReq:
      return "AssocReq";
    case MessageKind::AssocResp:
      return "AssocResp";
    case MessageKind::EapIdentityReq:
      return "EapIdentityReq";
    case MessageKind::EapIdentityResp:
      return "EapIdentityResp";
    case MessageKind::EapMethodOffer:
      return "EapMethodOffer";
    case MessageKind::EapMethodNak:
      return "EapMethodNak";
    case MessageKind::TunnelHello:
      return "TunnelHello";
    case MessageKind::TunnelCert:
      return "TunnelCert";
    case MessageKind::TunnelKeyExchange:
      return "TunnelKeyExchange";
    case MessageKind::TunnelData:
      return "TunnelData";
    case MessageKind::EapSuccess:
      return "EapSuccess";
    case MessageKind::EapFailure:
      return "EapFailure";
    case MessageKind::HandshakeMsg:
      return "HandshakeMsg";
  }
  return "Unknown";
}

std::size_t LeakageReport::wire_count() const {
  std::size_t n = 0;
  for (const auto& s : sightings) {
    if (s.via == "wire") ++n;
  }
  return n;
}

std::size_t LeakageReport::endpoint_count(const std::set<std::string>& observers) const {
  std::size_t n = 0;
  for (const auto& s : sightings) {
    if (s.via == "endpoint" && observers.count(s.observer)) ++n;
  }
  return n;
}

std::size_t LeakageReport::count_reaching(const std::set<std::string>& adversaries) const {
  return wire_count() + endpoint_count(adversaries);
}

const Message& Transcript::post(std::string from, std::string to, MessageKind kind,
                                Payload payload) {
  Message m;
  m.seq = next_seq_++;
  m.from = std::move(from);
  m.to = std::move(to);
  m.kind = kind;
  m.payload = std::move(payload);
  messages_.push_back(std::move(m));
  return messages_.back();
}

void Transcript::observe(const std::string& actor, std::uint64_t seq, const Payload& record) {
  views_[actor].emplace_back(seq, record);
}

void Transcript::register_secret(std::string name, Bytes value) {
  if (value.empty()) return;
  for (const auto& [existing_name, existing] : secrets_) {
    if (existing_name == name && existing == value) return;
  }
  secrets_.emplace_back(std::move(name), std::move(value));
}

const std::vector<std::pair<std::uint64_t, Payload>>* Transcript::view_of(
    const std::string& actor) const {
  auto it = views_.find(actor);
  return it == views_.end() ? nullptr : &it->second;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const Message& m : messages_) {
    nlohmann::json line{{"seq", m.seq},
                        {"from", m.from},
                        {"to", m.to},
                        {"kind", std::string(kind_name(m.kind))},
                        {"payload", m.payload}};
    out += line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

namespace {

bool contains_bytes(std::string_view haystack, const Bytes& needle) {
  if (needle.empty() || haystack.size() < needle.size()) return false;
  const std::string_view n(reinterpret_cast<const char*>(needle.data()), needle.size());
  return haystack.find(n) != std::string_view::npos;
}

bool value_carries(const std::string& value, const Bytes& secret) {
  if (contains_bytes(value, secret)) return true;
  if (auto decoded = crypto::base64_decode(value)) {
    const std::string_view view(reinterpret_cast<const char*>(decoded->data()), decoded->size());
    if (contains_bytes(view, secret)) return true;
  }
  return false;
}

}  // namespace

LeakageReport Transcript::leakage() const {
  LeakageReport report;
  for (const auto& [name, bytes] : secrets_) report.secrets.push_back(name);

  for (const auto& [name, bytes] : secrets_) {
    for (const Message& m : messages_) {
      for (const auto& [key, value] : m.payload) {
        if (value_carries(value, bytes)) {
          report.sightings.push_back(Sighting{name, "wire", "*", m.seq});
        }
      }
    }
    for (const auto& [actor, records] : views_) {
      for (const auto& [seq, record] : records) {
        for (const auto& [key, value] : record) {
          if (value_carries(value, bytes)) {
            report.sightings.push_back(Sighting{name, "endpoint", actor, seq});
          }
        }
      }
    }
  }
  return report;
}

}  // namespace rcms::sim
