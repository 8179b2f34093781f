#include "tocgen/features.hpp"

#include <unordered_set>

namespace tocgen {

namespace {

// Closed lexicon of common English verb forms (base, 3rd person, past,
// participle) plus modals.
const char* const kVerbForms[] = {
    "accept", "accepted", "accepting", "accepts", "accrue", "accrued", "accrues", "accruing",
    "achieve", "achieved", "achieves", "achieving", "act", "acted", "acting", "acts",
    "adjust", "adjusted", "adjusting", "adjusts", "adopt", "adopted", "adopting", "adopts",
    "affect", "affected", "affecting", "affects", "aggregate", "aggregated", "aggregates", "aggregating",
    "aim", "aimed", "aiming", "aims", "allocate", "allocated", "allocates", "allocating",
    "allow", "allowed", "allowing", "allows", "am", "amend", "amended", "amending",
    "amends", "amount", "amounted", "amounting", "amounts", "anticipate", "anticipated", "anticipates",
    "anticipating", "applied", "applies", "apply", "applying", "appoint", "appointed", "appointing",
    "appoints", "appreciate", "appreciated", "appreciates", "appreciating", "approve", "approved", "approves",
    "approving", "are", "arise", "arised", "arises", "arising", "ask", "asked",
    "asking", "asks", "assess", "assessed", "assesses", "assessing", "authorize", "authorized",
    "authorizes", "authorizing", "base", "based", "bases", "basing", "be", "bear",
    "bearing", "bears", "became", "become", "becomes", "becoming", "been", "began",
    "begin", "beginning", "begins", "begun", "being", "believe", "believed", "believes",
    "believing", "benefit", "benefited", "benefiting", "benefits", "bind", "binded", "binding",
    "binds", "bore", "borne", "borrow", "borrowed", "borrowing", "borrows", "bought",
    "break", "breaking", "breaks", "bring", "bringing", "brings", "broke", "broken",
    "brought", "build", "building", "builds", "built", "buy", "buying", "buys",
    "calculate", "calculated", "calculates", "calculating", "call", "called", "calling", "calls",
    "can", "carried", "carries", "carry", "carrying", "charge", "charged", "charges",
    "charging", "choose", "chooses", "choosing", "chose", "chosen", "compare", "compared",
    "compares", "comparing", "complied", "complies", "comply", "complying", "compound", "compounded",
    "compounding", "compounds", "comprise", "comprised", "comprises", "comprising", "conduct", "conducted",
    "conducting", "conducts", "consider", "considered", "considering", "considers", "constitute", "constituted",
    "constitutes", "constituting", "contain", "contained", "containing", "contains", "convert", "converted",
    "converting", "converts", "correspond", "corresponded", "corresponding", "corresponds", "could", "cover",
    "covered", "covering", "covers", "cut", "cuts", "cutting", "decline", "declined",
    "declines", "declining", "decrease", "decreased", "decreases", "decreasing", "deduct", "deducted",
    "deducting", "deducts", "define", "defined", "defines", "defining", "delegate", "delegated",
    "delegates", "delegating", "deliver", "delivered", "delivering", "delivers", "depend", "depended",
    "depending", "depends", "depreciate", "depreciated", "depreciates", "depreciating", "derive", "derived",
    "derives", "deriving", "describe", "described", "describes", "describing", "detail", "detailed",
    "detailing", "details", "determine", "determined", "determines", "determining", "did", "differ",
    "differed", "differing", "differs", "disclose", "disclosed", "discloses", "disclosing", "distribute",
    "distributed", "distributes", "distributing", "diversified", "diversifies", "diversify", "diversifying", "do",
    "does", "doing", "done", "draw", "drawing", "drawn", "draws", "drew",
    "drive", "driven", "drives", "driving", "drove", "earn", "earned", "earning",
    "earns", "enable", "enabled", "enables", "enabling", "enforce", "enforced", "enforces",
    "enforcing", "ensure", "ensured", "ensures", "ensuring", "entail", "entailed", "entailing",
    "entails", "entrust", "entrusted", "entrusting", "entrusts", "equal", "equaled", "equaling",
    "equals", "establish", "established", "establishes", "establishing", "estimate", "estimated", "estimates",
    "estimating", "exceed", "exceeded", "exceeding", "exceeds", "exchange", "exchanged", "exchanges",
    "exchanging", "execute", "executed", "executes", "executing", "expect", "expected", "expecting",
    "expects", "experience", "experienced", "experiences", "experiencing", "expire", "expired", "expires",
    "expiring", "explain", "explained", "explaining", "explains", "expose", "exposed", "exposes",
    "exposing", "face", "faced", "faces", "facing", "fall", "fallen", "falling",
    "falls", "feel", "feeling", "feels", "fell", "felt", "file", "filed",
    "files", "filing", "find", "finding", "finds", "fluctuate", "fluctuated", "fluctuates",
    "fluctuating", "follow", "followed", "following", "follows", "forecast", "forecasted", "forecasting",
    "forecasts", "found", "gave", "generate", "generated", "generates", "generating", "get",
    "gets", "getting", "give", "given", "gives", "giving", "go", "goes",
    "going", "gone", "got", "gotten", "govern", "governed", "governing", "governs",
    "grant", "granted", "granting", "grants", "grew", "grow", "growing", "grown",
    "grows", "guarantee", "guaranteed", "guarantees", "guaranteing", "had", "happen", "happened",
    "happening", "happens", "has", "have", "having", "hear", "heard", "hearing",
    "hears", "hedge", "hedged", "hedges", "hedging", "held", "help", "helped",
    "helping", "helps", "hold", "holding", "holds", "impact", "impacted", "impacting",
    "impacts", "implement", "implemented", "implementing", "implements", "include", "included", "includes",
    "including", "increase", "increased", "increases", "increasing", "incur", "incured", "incuring",
    "incurs", "intend", "intended", "intending", "intends", "invest", "invested", "investing",
    "invests", "involve", "involved", "involves", "involving", "is", "issue", "issued",
    "issues", "issuing", "keep", "keeping", "keeps", "kept", "knew", "know",
    "knowing", "known", "knows", "lead", "leading", "leads", "leave", "leaves",
    "leaving", "led", "left", "lend", "lended", "lending", "lends", "let",
    "lets", "letting", "levied", "levies", "levy", "levying", "like", "liked",
    "likes", "liking", "limit", "limited", "limiting", "limits", "liquidate", "liquidated",
    "liquidates", "liquidating", "list", "listed", "listing", "lists", "live", "lived",
    "lives", "living", "look", "looked", "looking", "looks", "lose", "loses",
    "losing", "lost", "made", "maintain", "maintained", "maintaining", "maintains", "make",
    "makes", "making", "manage", "managed", "manages", "managing", "match", "matched",
    "matches", "matching", "mature", "matured", "matures", "maturing", "may", "mean",
    "meaning", "means", "meant", "measure", "measured", "measures", "measuring", "meet",
    "meeting", "meets", "merge", "merged", "merges", "merging", "met", "might",
    "mitigate", "mitigated", "mitigates", "mitigating", "modified", "modifies", "modify", "modifying",
    "monitor", "monitored", "monitoring", "monitors", "move", "moved", "moves", "moving",
    "must", "need", "needed", "needing", "needs", "note", "noted", "notes",
    "notified", "notifies", "notify", "notifying", "noting", "oblige", "obliged", "obliges",
    "obliging", "obtain", "obtained", "obtaining", "obtains", "occur", "occured", "occuring",
    "occurs", "offer", "offered", "offering", "offers", "operate", "operated", "operates",
    "operating", "outline", "outlined", "outlines", "outlining", "paid", "pay", "paying",
    "pays", "perform", "performed", "performing", "performs", "permit", "permited", "permiting",
    "permits", "play", "played", "playing", "plays", "pose", "posed", "poses",
    "posing", "present", "presented", "presenting", "presents", "process", "processed", "processes",
    "processing", "prohibit", "prohibited", "prohibiting", "prohibits", "project", "projected", "projecting",
    "projects", "protect", "protected", "protecting", "protects", "provide", "provided", "provides",
    "providing", "publish", "published", "publishes", "publishing", "put", "puts", "putting",
    "qualified", "qualifies", "qualify", "qualifying", "ran", "range", "ranged", "ranges",
    "ranging", "rank", "ranked", "ranking", "ranks", "read", "reading", "reads",
    "rebalance", "rebalanced", "rebalances", "rebalancing", "receive", "received", "receives", "receiving",
    "record", "recorded", "recording", "records", "recover", "recovered", "recovering", "recovers",
    "redeem", "redeemed", "redeeming", "redeems", "reduce", "reduced", "reduces", "reducing",
    "refer", "refered", "refering", "refers", "reflect", "reflected", "reflecting", "reflects",
    "register", "registered", "registering", "registers", "regulate", "regulated", "regulates", "regulating",
    "reject", "rejected", "rejecting", "rejects", "relate", "related", "relates", "relating",
    "remain", "remained", "remaining", "remains", "renew", "renewed", "renewing", "renews",
    "replicate", "replicated", "replicates", "replicating", "report", "reported", "reporting", "reports",
    "represent", "represented", "representing", "represents", "require", "required", "requires", "requiring",
    "restrict", "restricted", "restricting", "restricts", "result", "resulted", "resulting", "results",
    "retain", "retained", "retaining", "retains", "review", "reviewed", "reviewing", "reviews",
    "revise", "revised", "revises", "revising", "rise", "risen", "rises", "rising",
    "rose", "run", "running", "runs", "said", "sat", "say", "saying",
    "says", "seek", "seeking", "seeks", "seem", "seemed", "seeming", "seems",
    "select", "selected", "selecting", "selects", "sell", "selling", "sells", "send",
    "sending", "sends", "sent", "serve", "served", "serves", "serving", "set",
    "sets", "setting", "settle", "settled", "settles", "settling", "shall", "should",
    "show", "showed", "showing", "shown", "shows", "sit", "sits", "sitting",
    "sold", "sought", "speak", "speaking", "speaks", "specified", "specifies", "specify",
    "specifying", "spend", "spending", "spends", "spent", "spoke", "spoken", "stand",
    "standing", "stands", "start", "started", "starting", "starts", "state", "stated",
    "states", "stating", "stood", "submit", "submited", "submiting", "submits", "subscribe",
    "subscribed", "subscribes", "subscribing", "suffer", "suffered", "suffering", "suffers", "summarize",
    "summarized", "summarizes", "summarizing", "suspend", "suspended", "suspending", "suspends", "take",
    "taken", "takes", "taking", "talk", "talked", "talking", "talks", "target",
    "targeted", "targeting", "targets", "tell", "telling", "tells", "terminate", "terminated",
    "terminates", "terminating", "think", "thinking", "thinks", "thought", "told", "took",
    "total", "totaled", "totaling", "totals", "track", "tracked", "tracking", "tracks",
    "transfer", "transfered", "transfering", "transfers", "tried", "tries", "try", "trying",
    "turn", "turned", "turning", "turns", "understand", "understanding", "understands", "understood",
    "update", "updated", "updates", "updating", "use", "used", "uses", "using",
    "value", "valued", "values", "valuing", "varied", "varies", "vary", "varying",
    "waive", "waived", "waives", "waiving", "want", "wanted", "wanting", "wants",
    "was", "wear", "wearing", "wears", "went", "were", "will", "wore",
    "work", "worked", "working", "works", "worn", "would", "write", "writes",
    "writing", "written", "wrote", "yield", "yielded", "yielding", "yields",
};

}  // namespace

bool is_verb_token(const std::string& token) {
  static const std::unordered_set<std::string> lexicon(std::begin(kVerbForms),
                                                       std::end(kVerbForms));
  return lexicon.contains(token);
}

}  // namespace tocgen
