#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace oodbsim {

struct StorageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physical transfers are attributed to the transaction that needed the page
// or to clustering work (placement, reorganization), including the write-back
// of a dirty page evicted on that fetch.
enum class IoCause : std::uint8_t { Transaction, Clustering };

struct IoCounters {
    long txn_reads = 0;
    long txn_writes = 0;
    long clust_reads = 0;
    long clust_writes = 0;

    long reads() const { return txn_reads + clust_reads; }
    long writes() const { return txn_writes + clust_writes; }
    long transaction() const { return txn_reads + txn_writes; }
    long clustering() const { return clust_reads + clust_writes; }
    long total() const { return reads() + writes(); }

    IoCounters& operator+=(const IoCounters& o) {
        txn_reads += o.txn_reads;
        txn_writes += o.txn_writes;
        clust_reads += o.clust_reads;
        clust_writes += o.clust_writes;
        return *this;
    }
    IoCounters operator-(const IoCounters& o) const {
        return IoCounters{txn_reads - o.txn_reads, txn_writes - o.txn_writes,
                          clust_reads - o.clust_reads, clust_writes - o.clust_writes};
    }
    bool operator==(const IoCounters& o) const = default;
};

struct Page {
    int id = 0;
    long used_bytes = 0;
    bool dirty = false;
    std::vector<int> objects;   // oids in placement order
};

// Paged store with a FIFO buffer of fixed page count. Placement calls are
// metadata only; I/O happens solely in fetch_page (miss read plus possible
// dirty eviction write) and write_page_direct.
class Store {
public:
    Store(long page_capacity_bytes, int buffer_pages)
        : capacity_(page_capacity_bytes), buffer_cap_(static_cast<std::size_t>(buffer_pages)) {
        if (page_capacity_bytes <= 0) throw StorageError("page capacity must be positive");
        if (buffer_pages < 1) throw StorageError("buffer must hold at least one page");
    }

    long capacity() const { return capacity_; }

    int new_page() {
        int id = next_page_id_++;
        Page p;
        p.id = id;
        pages_.emplace(id, std::move(p));
        return id;
    }

    const Page& page(int pid) const {
        auto it = pages_.find(pid);
        if (it == pages_.end()) throw StorageError("no such page " + std::to_string(pid));
        return it->second;
    }

    bool has_page(int pid) const { return pages_.count(pid) != 0; }
    long free_bytes(int pid) const { return capacity_ - page(pid).used_bytes; }
    const std::map<int, Page>& pages() const { return pages_; }

    int page_count() const { return static_cast<int>(pages_.size()); }
    int nonempty_page_count() const {
        int n = 0;
        for (const auto& [id, p] : pages_)
            if (!p.objects.empty()) ++n;
        return n;
    }

    // Freeing discards the page; a dirty freed page is never written back.
    void free_page(int pid) {
        Page& p = mutable_page(pid);
        if (!p.objects.empty()) throw StorageError("freeing non-empty page " + std::to_string(pid));
        for (auto it = fifo_.begin(); it != fifo_.end(); ++it) {
            if (*it == pid) {
                fifo_.erase(it);
                break;
            }
        }
        pages_.erase(pid);
    }

    int page_of(int oid) const {
        auto it = placement_.find(oid);
        return it == placement_.end() ? 0 : it->second.pid;
    }

    long object_bytes(int oid) const {
        auto it = placement_.find(oid);
        if (it == placement_.end()) throw StorageError("object not placed");
        return it->second.bytes;
    }

    void place_object(int oid, long bytes, int pid) {
        if (bytes <= 0) throw StorageError("object size must be positive");
        if (bytes > capacity_) throw StorageError("object larger than a page");
        Page& dst = mutable_page(pid);
        auto it = placement_.find(oid);
        long already = (it != placement_.end() && it->second.pid == pid) ? it->second.bytes : 0;
        if (dst.used_bytes - already + bytes > capacity_)
            throw StorageError("object does not fit on page " + std::to_string(pid));
        if (it != placement_.end()) detach(oid, it->second);
        dst.used_bytes += bytes;
        dst.objects.push_back(oid);
        dst.dirty = true;
        placement_[oid] = Placement{pid, bytes};
    }

    void remove_object(int oid) {
        auto it = placement_.find(oid);
        if (it == placement_.end()) throw StorageError("object not placed");
        detach(oid, it->second);
        placement_.erase(it);
    }

    void resize_object(int oid, long new_bytes) {
        auto it = placement_.find(oid);
        if (it == placement_.end()) throw StorageError("object not placed");
        Page& p = mutable_page(it->second.pid);
        long delta = new_bytes - it->second.bytes;
        if (p.used_bytes + delta > capacity_)
            throw StorageError("grown object does not fit on page " + std::to_string(p.id));
        p.used_bytes += delta;
        p.dirty = true;
        it->second.bytes = new_bytes;
    }

    bool object_fits_after_growth(int oid, long new_bytes) const {
        auto it = placement_.find(oid);
        if (it == placement_.end()) throw StorageError("object not placed");
        return page(it->second.pid).used_bytes + (new_bytes - it->second.bytes) <= capacity_;
    }

    bool in_buffer(int pid) const {
        for (int b : fifo_)
            if (b == pid) return true;
        return false;
    }

    // front = oldest, next to be evicted
    std::vector<int> buffered_pages() const { return {fifo_.begin(), fifo_.end()}; }

    // Read through the buffer. A hit is free; a miss evicts FIFO when the
    // buffer is full (writing back a dirty victim on the same cause), then
    // charges one read. Re-referencing a buffered page does not reorder it.
    void fetch_page(int pid, IoCause cause) {
        mutable_page(pid);
        if (in_buffer(pid)) {
            ++buffer_hits;
            return;
        }
        ++buffer_misses;
        if (fifo_.size() == buffer_cap_) {
            int victim = fifo_.front();
            fifo_.pop_front();
            Page& v = mutable_page(victim);
            if (v.dirty) {
                charge_write(cause);
                v.dirty = false;
            }
        }
        charge_read(cause);
        fifo_.push_back(pid);
    }

    // One write that bypasses the buffer; the page is clean afterwards.
    void write_page_direct(int pid, IoCause cause) {
        Page& p = mutable_page(pid);
        charge_write(cause);
        p.dirty = false;
    }

    void mark_dirty(int pid) { mutable_page(pid).dirty = true; }

    IoCounters counters;
    long buffer_hits = 0;
    long buffer_misses = 0;

private:
    struct Placement {
        int pid = 0;
        long bytes = 0;
    };

    Page& mutable_page(int pid) {
        auto it = pages_.find(pid);
        if (it == pages_.end()) throw StorageError("no such page " + std::to_string(pid));
        return it->second;
    }

    void detach(int oid, const Placement& pl) {
        Page& p = mutable_page(pl.pid);
        p.used_bytes -= pl.bytes;
        for (auto it = p.objects.begin(); it != p.objects.end(); ++it) {
            if (*it == oid) {
                p.objects.erase(it);
                break;
            }
        }
        p.dirty = true;
    }

    void charge_read(IoCause c) { (c == IoCause::Transaction ? counters.txn_reads : counters.clust_reads)++; }
    void charge_write(IoCause c) { (c == IoCause::Transaction ? counters.txn_writes : counters.clust_writes)++; }

    long capacity_;
    std::size_t buffer_cap_;
    std::map<int, Page> pages_;
    std::unordered_map<int, Placement> placement_;
    std::deque<int> fifo_;
    int next_page_id_ = 1;
};

} // namespace oodbsim
