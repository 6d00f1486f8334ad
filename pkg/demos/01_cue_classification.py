"""Which cues count, and who do they point at?

A cue is any reply containing "being sarcastic".  The classifier looks at the
few tokens before the phrase and decides whether the sarcastic author is the
cue's author (1st person), its addressee (2nd) or someone else (3rd).
Anything it is not sure about comes back as unknown.
"""
from reactive_supervision import classify_cue, is_cue_candidate

cues = [
    "I was only being sarcastic lol",
    "Why are you being sarcastic?",
    "She was just being sarcastic!",
    "Shudda been more clear...I was being sarcastic",
    "Take it you are being sarcastic",
    "Mind blown. Had no idea he was being sarcastic",
    # the conservative rules reject these
    "I wasn't being sarcastic",
    "You do realize @user was being sarcastic right?",
    "they were being sarcastic",
    "he thinks i am being sarcastic",
    "He loves sarcasm",
]

for text in cues:
    d = classify_cue(text)
    person = d.person.value if d.is_known else "?"
    print(f"{text!r:55}  candidate={is_cue_candidate(text)!s:5}  person={person}  ({d.reason.value})")
