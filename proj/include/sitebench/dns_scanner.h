#ifndef SITEBENCH_DNS_SCANNER_H_
#define SITEBENCH_DNS_SCANNER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/dns_wire.h"
#include "sitebench/facts.h"
#include "sitebench/public_suffix.h"

namespace sitebench {

// First TXT string starting with "v=spf1" (case-insensitive).
std::optional<std::string> FindSpfRecord(const std::vector<std::string>& txts);
// First TXT string starting with "v=DMARC1".
std::optional<std::string> FindDmarcRecord(
    const std::vector<std::string>& txts);

// Qualifier of the "all" mechanism; kNeutral when the record has none.
// Total over arbitrary input.
SpfPolicy SpfPolicyOf(std::string_view record);

// The p= tag; kNone when missing or not a known policy.
DmarcPolicy DmarcPolicyOf(std::string_view record);

// Queries A/AAAA, MX, NS and TXT for |host| and TXT for _dmarc.<host>. MX,
// NS, SPF and DMARC fall back to the registrable domain when |host| itself
// has none. The DNSSEC signal comes from the A lookup.
DnsFacts ResolveDns(std::string_view host,
                    dns::DnsClient& client,
                    const PublicSuffixList& psl);

}  // namespace sitebench

#endif  // SITEBENCH_DNS_SCANNER_H_
