"""Alice keeps a diary with kappa pages a day, always writing the newest
unrecorded event first.  This walk-through prints a few traces."""
from treembed.diary import alice_diary, is_recorded
from treembed.words import sentence


def show(kappa, *days):
    chapters, prov = alice_diary(kappa, sentence(*days))
    print(f"kappa={kappa}  days={' | '.join(days)}")
    for day, (word, chapter, left) in enumerate(zip(days, chapters, prov.leftover), start=1):
        print(f"  day {day}: lived {word!r:8} wrote {''.join(chapter)!r:6} backlog {left}")
    return prov


print("Two days: four events on day one do not fit on three pages.")
prov = show(3, "abac", "cb")
print("  day 1, first event ->", "chapter %d page %d" % is_recorded(prov, 1, 1))
print()
print("Five days: the backlog keeps getting pushed back by busier days.")
show(3, "abac", "cb", "accc", "bcbc", "a")
print()
print("Same five days with a quieter third day: the backlog clears early.")
show(3, "abac", "cb", "acc", "bcbc", "a")
print()
print("With too few pages an old event can be lost for good:")
prov = show(1, "abc", "ab")
print("  day 1 position 1 recorded?", is_recorded(prov, 1, 1))
