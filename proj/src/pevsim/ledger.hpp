#ifndef PEVSIM_LEDGER_HPP
#define PEVSIM_LEDGER_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "domain.hpp"

namespace pevsim {

using AccountId = std::string;
using TxId = std::uint64_t;
using ContractId = std::uint64_t;

enum class TxKind { deposit_bond, return_bond, forfeit_bond, transfer };

std::string to_string(TxKind k);
TxKind tx_kind_from_string(const std::string& s);

// Observer-minted statement that a vehicle stood at a station at a time.
struct PopAttestation {
    std::string observer;
    StationId station_id = 0;
    double time_s = 0.0;
};

struct Transaction {
    TxId id = 0;
    AccountId issuer;
    TxKind kind = TxKind::transfer;
    double amount = 0.0;
    std::array<TxId, 2> approves{0, 0}; // parent transactions; genesis exempt
    bool is_genesis = false;
    std::optional<ContractId> contract;
    std::optional<AccountId> counterparty;
    std::optional<PopAttestation> pop;
    double timestamp = 0.0;
};

// Append-only transaction DAG with abstracted proof-of-work: an issued
// transaction stays pending for pow_delay steps, then confirms; confirmation
// removes its parents from the tip set and adds itself.
class Tangle {
  public:
    explicit Tangle(int pow_delay_steps = 2);

    // Parents default to uniform random tip selection; explicit parents (for
    // tests) must reference confirmed transactions.
    TxId issue(Transaction tx, double now_s, Rng& rng,
               std::optional<std::array<TxId, 2>> parents = std::nullopt);
    void advance(double now_s); // confirm pending transactions that are due

    const Transaction& tx(TxId id) const;
    std::size_t size() const { return transactions_.size(); }
    std::size_t pending_count() const { return pending_.size(); }
    const std::set<TxId>& tips() const { return tips_; }
    bool is_acyclic() const; // independent check used by tests and replay

    template <typename F>
    void for_each(F&& f) const {
        for (const auto& t : transactions_) f(t);
    }

  private:
    std::vector<Transaction> transactions_; // index == id
    std::set<TxId> tips_;                   // confirmed, unapproved
    std::vector<TxId> confirmed_;           // confirmation order
    struct Pending {
        TxId id;
        double ready_at_s;
    };
    std::deque<Pending> pending_;
    int pow_delay_steps_;
};

// Token balances plus per-contract escrow sub-balances.  Supply is conserved:
// sum(balances) + sum(escrows) == sum(endowments), always.
class AccountBook {
  public:
    void create_account(const AccountId& id, double endowment);
    bool has_account(const AccountId& id) const;
    double balance(const AccountId& id) const;
    double escrowed_total() const;
    double endowed_total() const { return endowed_total_; }
    double supply() const;

    void move_to_escrow(const AccountId& from, ContractId contract, double amount);
    void release_escrow(ContractId contract, const AccountId& to);
    double escrow_amount(ContractId contract) const;
    void transfer(const AccountId& from, const AccountId& to, double amount);

    const std::map<AccountId, double>& balances() const { return balances_; }

  private:
    std::map<AccountId, double> balances_;
    std::map<ContractId, double> escrows_;
    double endowed_total_ = 0.0;
};

enum class EscrowStatus { open, returned, forfeited };

std::string to_string(EscrowStatus s);

struct EscrowContract {
    ContractId id = 0;
    AccountId vehicle_account;
    AccountId station_account;
    StationId station_id = 0;
    double bond_amount = 0.0; // T_C
    double deadline_s = 0.0;
    EscrowStatus status = EscrowStatus::open;
};

// Ground truth of who is physically where; only the engine's arrival path
// records presence, which is what makes attestations unforgeable here.
class ObserverRegistry {
  public:
    void record_presence(const AccountId& vehicle_account, StationId station, double time_s);
    PopAttestation attest_position(const std::string& observer, const AccountId& vehicle_account,
                                   StationId station, double time_s) const;

  private:
    std::map<AccountId, std::vector<std::pair<StationId, double>>> arrivals_;
};

struct SettlementRecord {
    ContractId contract = 0;
    bool returned = false;
    double time_s = 0.0;
};

// Facade tying tangle, accounts, contracts and observers into the bond
// lifecycle: deposit on assignment, return on attested arrival, forfeit on
// deadline expiry.
class Ledger {
  public:
    explicit Ledger(int pow_delay_steps, std::uint64_t tip_seed);

    void create_account(const AccountId& id, double endowment, double now_s);
    ContractId open_escrow(const AccountId& vehicle, const AccountId& station_account,
                           StationId station_id, double bond, double deadline_s, double now_s);
    // Valid attestation (right station, on time) -> returned; past deadline
    // without one -> forfeited; otherwise the contract is not yet settleable.
    const EscrowContract& settle_escrow(ContractId id, const std::optional<PopAttestation>& pop,
                                        double now_s);
    void transfer(const AccountId& from, const AccountId& to, double amount, double now_s);
    void advance(double now_s) { tangle_.advance(now_s); }

    const EscrowContract& contract(ContractId id) const;
    std::size_t contract_count() const { return contracts_.size(); }
    const std::vector<SettlementRecord>& settlements() const { return settlements_; }
    const AccountBook& book() const { return book_; }
    const Tangle& tangle() const { return tangle_; }
    ObserverRegistry& observers() { return observers_; }

    bool conservation_holds(double tol = 1e-9) const;
    void dump(std::ostream& out) const; // line-delimited records

  private:
    TxId append_tx(Transaction tx, double now_s);

    Tangle tangle_;
    AccountBook book_;
    ObserverRegistry observers_;
    std::vector<EscrowContract> contracts_; // index == id
    std::vector<SettlementRecord> settlements_;
    std::vector<std::pair<AccountId, double>> endowments_; // creation order, for dumps
    Rng tip_rng_;
};

// Re-validates a ledger dump: DAG acyclicity, token conservation, settlement
// soundness, no double deposits.  Returns human-readable report lines;
// `ok` is false on any violation.
struct ReplayReport {
    bool ok = true;
    std::vector<std::string> lines;
};

ReplayReport replay_ledger_dump(std::istream& in);

} // namespace pevsim

#endif
