#include "ledger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace pevsim {

std::string to_string(TxKind k) {
    switch (k) {
        case TxKind::deposit_bond: return "deposit_bond";
        case TxKind::return_bond: return "return_bond";
        case TxKind::forfeit_bond: return "forfeit_bond";
        case TxKind::transfer: return "transfer";
    }
    return "transfer";
}

TxKind tx_kind_from_string(const std::string& s) {
    if (s == "deposit_bond") return TxKind::deposit_bond;
    if (s == "return_bond") return TxKind::return_bond;
    if (s == "forfeit_bond") return TxKind::forfeit_bond;
    if (s == "transfer") return TxKind::transfer;
    throw VerificationError("unknown transaction kind '" + s + "'");
}

std::string to_string(EscrowStatus s) {
    switch (s) {
        case EscrowStatus::open: return "open";
        case EscrowStatus::returned: return "returned";
        case EscrowStatus::forfeited: return "forfeited";
    }
    return "open";
}

// ---------------------------------------------------------------------------
// Tangle

Tangle::Tangle(int pow_delay_steps) : pow_delay_steps_(pow_delay_steps) {
    Transaction genesis;
    genesis.id = 0;
    genesis.issuer = "genesis";
    genesis.kind = TxKind::transfer;
    genesis.amount = 0.0;
    genesis.is_genesis = true;
    transactions_.push_back(genesis);
    tips_.insert(0); // genesis confirms immediately
    confirmed_.push_back(0);
}

TxId Tangle::issue(Transaction tx, double now_s, Rng& rng,
                   std::optional<std::array<TxId, 2>> parents) {
    if (tx.amount < 0.0) throw DomainError("transaction amount must be nonnegative");

    const TxId id = transactions_.size();
    std::array<TxId, 2> chosen{0, 0};
    if (parents) {
        for (TxId p : *parents) {
            if (p >= id) throw InvalidParents("parent " + std::to_string(p) + " does not precede tx");
            bool pending = std::any_of(pending_.begin(), pending_.end(),
                                       [&](const Pending& q) { return q.id == p; });
            if (pending) throw InvalidParents("parent " + std::to_string(p) + " is still pending");
        }
        chosen = *parents;
    } else {
        // Uniform random tip selection; with a single tip the second parent is
        // drawn from the confirmed set.
        std::vector<TxId> tip_list(tips_.begin(), tips_.end());
        if (tip_list.size() >= 2) {
            std::uniform_int_distribution<std::size_t> pick(0, tip_list.size() - 1);
            const std::size_t a = pick(rng);
            std::size_t b = pick(rng);
            while (b == a) b = pick(rng);
            chosen = {tip_list[a], tip_list[b]};
        } else {
            chosen[0] = tip_list.front();
            std::uniform_int_distribution<std::size_t> pick(0, confirmed_.size() - 1);
            chosen[1] = confirmed_[pick(rng)];
        }
    }

    tx.id = id;
    tx.approves = chosen;
    tx.is_genesis = false;
    transactions_.push_back(std::move(tx));
    pending_.push_back(Pending{id, now_s + pow_delay_steps_});
    return id;
}

void Tangle::advance(double now_s) {
    while (!pending_.empty() && pending_.front().ready_at_s <= now_s) {
        const TxId id = pending_.front().id;
        pending_.pop_front();
        for (TxId p : transactions_[id].approves) tips_.erase(p);
        tips_.insert(id);
        confirmed_.push_back(id);
    }
}

const Transaction& Tangle::tx(TxId id) const {
    if (id >= transactions_.size()) throw DomainError("unknown transaction " + std::to_string(id));
    return transactions_[id];
}

bool Tangle::is_acyclic() const {
    // Kahn's algorithm over approval edges (child -> parent).
    std::vector<int> out_degree(transactions_.size(), 0);
    std::vector<std::vector<TxId>> approvers(transactions_.size());
    for (const auto& t : transactions_) {
        if (t.is_genesis) continue;
        for (TxId p : t.approves) {
            if (p >= transactions_.size()) return false;
            ++out_degree[t.id];
            approvers[p].push_back(t.id);
        }
    }
    std::vector<TxId> frontier;
    for (std::size_t i = 0; i < transactions_.size(); ++i) {
        if (out_degree[i] == 0) frontier.push_back(i);
    }
    std::size_t visited = 0;
    while (!frontier.empty()) {
        const TxId u = frontier.back();
        frontier.pop_back();
        ++visited;
        for (TxId child : approvers[u]) {
            if (--out_degree[child] == 0) frontier.push_back(child);
        }
    }
    return visited == transactions_.size();
}

// ---------------------------------------------------------------------------
// AccountBook

void AccountBook::create_account(const AccountId& id, double endowment) {
    if (balances_.count(id)) throw DomainError("account '" + id + "' already exists");
    if (endowment < 0.0) throw DomainError("endowment must be nonnegative");
    balances_[id] = endowment;
    endowed_total_ += endowment;
}

bool AccountBook::has_account(const AccountId& id) const { return balances_.count(id) > 0; }

double AccountBook::balance(const AccountId& id) const {
    auto it = balances_.find(id);
    if (it == balances_.end()) throw DomainError("unknown account '" + id + "'");
    return it->second;
}

double AccountBook::escrowed_total() const {
    double sum = 0.0;
    for (const auto& [cid, amount] : escrows_) sum += amount;
    return sum;
}

double AccountBook::supply() const {
    double sum = escrowed_total();
    for (const auto& [id, bal] : balances_) sum += bal;
    return sum;
}

void AccountBook::move_to_escrow(const AccountId& from, ContractId contract, double amount) {
    const double bal = balance(from);
    if (bal < amount) {
        std::ostringstream os;
        os << "account '" << from << "' holds " << bal << " tokens, bond needs " << amount;
        throw InsufficientBalance(os.str());
    }
    if (escrows_.count(contract)) throw DomainError("escrow already funded for contract");
    balances_[from] -= amount;
    escrows_[contract] = amount;
}

void AccountBook::release_escrow(ContractId contract, const AccountId& to) {
    auto it = escrows_.find(contract);
    if (it == escrows_.end()) throw DomainError("no escrow for contract");
    balances_.at(to) += it->second;
    escrows_.erase(it);
}

double AccountBook::escrow_amount(ContractId contract) const {
    auto it = escrows_.find(contract);
    return it == escrows_.end() ? 0.0 : it->second;
}

void AccountBook::transfer(const AccountId& from, const AccountId& to, double amount) {
    if (amount < 0.0) throw DomainError("transfer amount must be nonnegative");
    if (balance(from) < amount) throw InsufficientBalance("transfer exceeds balance");
    if (!has_account(to)) throw DomainError("unknown transfer recipient '" + to + "'");
    balances_[from] -= amount;
    balances_[to] += amount;
}

// ---------------------------------------------------------------------------
// ObserverRegistry

void ObserverRegistry::record_presence(const AccountId& vehicle_account, StationId station,
                                       double time_s) {
    arrivals_[vehicle_account].emplace_back(station, time_s);
}

PopAttestation ObserverRegistry::attest_position(const std::string& observer,
                                                 const AccountId& vehicle_account,
                                                 StationId station, double time_s) const {
    auto it = arrivals_.find(vehicle_account);
    if (it != arrivals_.end()) {
        for (const auto& [st, at] : it->second) {
            if (st == station && at <= time_s) {
                return PopAttestation{observer, station, time_s};
            }
        }
    }
    throw NotAtStation("vehicle '" + vehicle_account + "' not observed at station " +
                       std::to_string(station));
}

// ---------------------------------------------------------------------------
// Ledger

Ledger::Ledger(int pow_delay_steps, std::uint64_t tip_seed)
    : tangle_(pow_delay_steps), tip_rng_(tip_seed) {}

void Ledger::create_account(const AccountId& id, double endowment, double) {
    book_.create_account(id, endowment);
    endowments_.emplace_back(id, endowment);
}

TxId Ledger::append_tx(Transaction tx, double now_s) {
    tx.timestamp = now_s;
    return tangle_.issue(std::move(tx), now_s, tip_rng_);
}

ContractId Ledger::open_escrow(const AccountId& vehicle, const AccountId& station_account,
                               StationId station_id, double bond, double deadline_s,
                               double now_s) {
    if (!book_.has_account(vehicle) || !book_.has_account(station_account)) {
        throw DomainError("escrow accounts must exist");
    }
    const ContractId cid = contracts_.size();
    book_.move_to_escrow(vehicle, cid, bond); // throws InsufficientBalance
    contracts_.push_back(EscrowContract{cid, vehicle, station_account, station_id, bond,
                                        deadline_s, EscrowStatus::open});

    Transaction tx;
    tx.issuer = vehicle;
    tx.kind = TxKind::deposit_bond;
    tx.amount = bond;
    tx.contract = cid;
    tx.counterparty = station_account;
    append_tx(std::move(tx), now_s);
    return cid;
}

const EscrowContract& Ledger::settle_escrow(ContractId id, const std::optional<PopAttestation>& pop,
                                            double now_s) {
    if (id >= contracts_.size()) throw DomainError("unknown contract " + std::to_string(id));
    EscrowContract& c = contracts_[id];
    if (c.status != EscrowStatus::open) {
        throw AlreadySettled("contract " + std::to_string(id) + " already " + to_string(c.status));
    }
    const bool valid_pop =
        pop && pop->station_id == c.station_id && pop->time_s <= c.deadline_s;
    if (valid_pop) {
        c.status = EscrowStatus::returned;
        book_.release_escrow(id, c.vehicle_account);
        Transaction tx;
        tx.issuer = c.station_account;
        tx.kind = TxKind::return_bond;
        tx.amount = c.bond_amount;
        tx.contract = id;
        tx.counterparty = c.vehicle_account;
        tx.pop = pop;
        append_tx(std::move(tx), now_s);
    } else if (now_s > c.deadline_s) {
        c.status = EscrowStatus::forfeited;
        book_.release_escrow(id, c.station_account);
        Transaction tx;
        tx.issuer = c.station_account;
        tx.kind = TxKind::forfeit_bond;
        tx.amount = c.bond_amount;
        tx.contract = id;
        tx.counterparty = c.station_account;
        append_tx(std::move(tx), now_s);
    } else {
        throw DomainError("contract " + std::to_string(id) +
                          " has no valid attestation and has not expired yet");
    }
    settlements_.push_back(SettlementRecord{id, c.status == EscrowStatus::returned, now_s});
    return c;
}

void Ledger::transfer(const AccountId& from, const AccountId& to, double amount, double now_s) {
    book_.transfer(from, to, amount);
    Transaction tx;
    tx.issuer = from;
    tx.kind = TxKind::transfer;
    tx.amount = amount;
    tx.counterparty = to;
    append_tx(std::move(tx), now_s);
}

const EscrowContract& Ledger::contract(ContractId id) const {
    if (id >= contracts_.size()) throw DomainError("unknown contract " + std::to_string(id));
    return contracts_[id];
}

bool Ledger::conservation_holds(double tol) const {
    return std::abs(book_.supply() - book_.endowed_total()) <= tol;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void Ledger::dump(std::ostream& out) const {
    out << "# pevsim-ledger 1\n";
    for (const auto& [account, endowment] : endowments_) {
        out << "A " << account << ' ' << fmt_double(endowment) << '\n';
    }
    for (const auto& c : contracts_) {
        out << "C " << c.id << ' ' << c.vehicle_account << ' ' << c.station_account << ' '
            << c.station_id << ' ' << fmt_double(c.bond_amount) << ' ' << fmt_double(c.deadline_s)
            << ' ' << to_string(c.status) << '\n';
    }
    tangle_.for_each([&](const Transaction& t) {
        out << "T " << t.id << ' ' << fmt_double(t.timestamp) << ' ' << t.issuer << ' '
            << to_string(t.kind) << ' ' << fmt_double(t.amount) << ' ';
        if (t.contract) out << *t.contract;
        else out << '-';
        out << ' ';
        if (t.counterparty) out << *t.counterparty;
        else out << '-';
        out << ' ';
        if (t.is_genesis) out << "- - 1";
        else out << t.approves[0] << ' ' << t.approves[1] << " 0";
        if (t.pop) {
            out << " P " << t.pop->observer << ' ' << t.pop->station_id << ' '
                << fmt_double(t.pop->time_s);
        }
        out << '\n';
    });
}

// ---------------------------------------------------------------------------
// Replay verification

namespace {

struct DumpContract {
    AccountId vehicle, station_account;
    StationId station_id = 0;
    double bond = 0.0;
    double deadline = 0.0;
    std::string status;
    int deposits = 0;
    int terminals = 0;
    std::string terminal_kind;
};

} // namespace

ReplayReport replay_ledger_dump(std::istream& in) {
    ReplayReport report;
    auto fail = [&](const std::string& msg) {
        report.ok = false;
        report.lines.push_back("VIOLATION: " + msg);
    };

    std::map<AccountId, double> balances;
    std::map<ContractId, double> escrow;
    std::map<ContractId, DumpContract> contracts;
    double endowed = 0.0;
    long last_tx_id = -1;
    std::size_t tx_count = 0, account_count = 0;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        const std::string where = "line " + std::to_string(line_no);
        if (tag == "A") {
            AccountId id;
            double endowment;
            if (!(ls >> id >> endowment)) {
                fail(where + ": malformed account record");
                continue;
            }
            if (balances.count(id)) fail(where + ": duplicate account '" + id + "'");
            balances[id] = endowment;
            endowed += endowment;
            ++account_count;
        } else if (tag == "C") {
            ContractId cid;
            DumpContract c;
            if (!(ls >> cid >> c.vehicle >> c.station_account >> c.station_id >> c.bond >>
                  c.deadline >> c.status)) {
                fail(where + ": malformed contract record");
                continue;
            }
            contracts[cid] = c;
        } else if (tag == "T") {
            TxId id;
            double timestamp, amount;
            std::string issuer, kind_s, contract_s, counterparty_s, p1_s, p2_s, genesis_s;
            if (!(ls >> id >> timestamp >> issuer >> kind_s >> amount >> contract_s >>
                  counterparty_s >> p1_s >> p2_s >> genesis_s)) {
                fail(where + ": malformed transaction record");
                continue;
            }
            ++tx_count;
            if (static_cast<long>(id) <= last_tx_id) {
                fail(where + ": transaction ids must be strictly increasing");
            }
            last_tx_id = static_cast<long>(id);
            if (amount < 0.0) fail(where + ": negative amount");

            const bool genesis = genesis_s == "1";
            if (!genesis) {
                for (const std::string& ps : {p1_s, p2_s}) {
                    try {
                        const auto p = std::stoull(ps);
                        if (p >= id) fail(where + ": parent " + ps + " does not precede tx (cycle)");
                    } catch (const std::exception&) {
                        fail(where + ": parent id '" + ps + "' not numeric");
                    }
                }
            }

            std::string pop_tag, pop_observer;
            StationId pop_station = -1;
            double pop_time = 0.0;
            const bool has_pop =
                static_cast<bool>(ls >> pop_tag >> pop_observer >> pop_station >> pop_time) &&
                pop_tag == "P";

            TxKind kind;
            try {
                kind = tx_kind_from_string(kind_s);
            } catch (const Error& e) {
                fail(where + ": " + e.what());
                continue;
            }

            auto need_account = [&](const AccountId& a) -> bool {
                if (!balances.count(a)) {
                    fail(where + ": unknown account '" + a + "'");
                    return false;
                }
                return true;
            };

            if (kind == TxKind::transfer && genesis) continue; // genesis moves nothing

            if (kind == TxKind::transfer) {
                if (!need_account(issuer) || !need_account(counterparty_s)) continue;
                balances[issuer] -= amount;
                balances[counterparty_s] += amount;
                if (balances[issuer] < -1e-9) fail(where + ": account '" + issuer + "' overdrawn");
                continue;
            }

            ContractId cid = 0;
            try {
                cid = std::stoull(contract_s);
            } catch (const std::exception&) {
                fail(where + ": bond transaction lacks a contract id");
                continue;
            }
            auto cit = contracts.find(cid);
            if (cit == contracts.end()) {
                fail(where + ": unknown contract " + contract_s);
                continue;
            }
            DumpContract& c = cit->second;
            switch (kind) {
                case TxKind::deposit_bond: {
                    if (++c.deposits > 1) {
                        fail(where + ": duplicate deposit for contract " + contract_s);
                        break;
                    }
                    if (std::abs(amount - c.bond) > 1e-9) {
                        fail(where + ": deposit amount differs from contract bond");
                    }
                    if (!need_account(c.vehicle)) break;
                    balances[c.vehicle] -= amount;
                    if (balances[c.vehicle] < -1e-9) {
                        fail(where + ": vehicle '" + c.vehicle + "' overdrawn by bond");
                    }
                    escrow[cid] += amount;
                    break;
                }
                case TxKind::return_bond: {
                    ++c.terminals;
                    c.terminal_kind = "returned";
                    if (!has_pop) {
                        fail(where + ": return_bond without proof of position");
                    } else {
                        if (pop_station != c.station_id) {
                            fail(where + ": attestation names station " +
                                 std::to_string(pop_station) + ", contract expects " +
                                 std::to_string(c.station_id));
                        }
                        if (pop_time > c.deadline) {
                            fail(where + ": attestation after the contract deadline");
                        }
                    }
                    if (escrow[cid] + 1e-9 < amount) fail(where + ": escrow underfunded for return");
                    escrow[cid] -= amount;
                    if (need_account(c.vehicle)) balances[c.vehicle] += amount;
                    break;
                }
                case TxKind::forfeit_bond: {
                    ++c.terminals;
                    c.terminal_kind = "forfeited";
                    if (timestamp <= c.deadline) {
                        fail(where + ": forfeiture issued before the deadline expired");
                    }
                    if (escrow[cid] + 1e-9 < amount) fail(where + ": escrow underfunded for forfeit");
                    escrow[cid] -= amount;
                    if (need_account(c.station_account)) balances[c.station_account] += amount;
                    break;
                }
                case TxKind::transfer:
                    break;
            }
        } else {
            fail(where + ": unknown record tag '" + tag + "'");
        }
    }

    for (const auto& [cid, c] : contracts) {
        const std::string name = "contract " + std::to_string(cid);
        if (c.deposits == 0) fail(name + " has no deposit");
        if (c.terminals > 1) fail(name + " settled more than once");
        if (c.status == "open" && c.terminals != 0) fail(name + " marked open but settled");
        if (c.status != "open") {
            if (c.terminals == 0) {
                fail(name + " marked " + c.status + " but has no settlement transaction");
            } else if (c.terminal_kind != c.status) {
                fail(name + " marked " + c.status + " but settled as " + c.terminal_kind);
            }
        }
    }

    double total = 0.0;
    for (const auto& [id, b] : balances) {
        total += b;
        if (b < -1e-9) fail("final balance of '" + id + "' is negative");
    }
    for (const auto& [cid, amount] : escrow) {
        total += amount;
        if (amount < -1e-9) fail("escrow of contract " + std::to_string(cid) + " is negative");
    }
    if (std::abs(total - endowed) > 1e-6) {
        fail("token supply not conserved: endowed " + fmt_double(endowed) + ", final " +
             fmt_double(total));
    }

    report.lines.push_back("accounts: " + std::to_string(account_count));
    report.lines.push_back("contracts: " + std::to_string(contracts.size()));
    report.lines.push_back("transactions: " + std::to_string(tx_count));
    report.lines.push_back(report.ok ? "result: OK" : "result: FAILED");
    return report;
}

} // namespace pevsim
