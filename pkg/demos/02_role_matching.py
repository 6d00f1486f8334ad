"""From author letters to roles.

Authors are rewritten as letters, cue author first: A, B, C, ...  Each
person class has an anchored pattern over that string; a match pins down the
sarcastic tweet and, when unambiguous, the oblivious and eliciting tweets.
"""
from reactive_supervision import PersonClass, match_roles, pattern_for, positions_of
from reactive_supervision.sequencer import canonical_letters

# raw author ids, cue first, as they come out of a reply chain
raw = ["@dana", "@erin", "@dana", "@fred"]
letters, mapping = canonical_letters(raw)
print("authors", raw, "->", letters, mapping)

for person in (PersonClass.FIRST, PersonClass.SECOND, PersonClass.THIRD):
    print(f"\n{person.name.title()} person: {pattern_for(person).pattern_source}")
    for seq in ["AB", "ABA", "ABAB", "ABAC", "ABC", "ABCB", "ABCA", "ABABC", "ABAA"]:
        r = match_roles(seq, person)
        if r is None:
            print(f"  {seq:6} NOMATCH")
            continue
        position, lag = positions_of(len(seq), r.sarcastic_index)
        print(f"  {seq:6} sarcastic={r.sarcastic_index} oblivious={r.oblivious_index} "
              f"eliciting={r.eliciting_index}  position={position} cue_lag={lag}")
