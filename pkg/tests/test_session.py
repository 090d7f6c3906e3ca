import json
import threading

import pytest

from infoforge.errors import NotFound
from infoforge.session import Selections, Session, SessionStore, new_ulid


def _session(sid="S1"):
    return Session(id=sid, markdown="- title: a\n", canvas={"width_px": 800, "height_px": 600})


def test_ulid_shape_and_uniqueness():
    ids = {new_ulid() for _ in range(500)}
    assert len(ids) == 500
    assert all(len(u) == 26 for u in ids)


def test_save_load_round_trip(tmp_path):
    store = SessionStore(tmp_path)
    created = store.create(_session())
    loaded = store.load("S1")
    assert loaded == created
    assert loaded.selections == Selections()


def test_load_unknown_raises(tmp_path):
    with pytest.raises(NotFound):
        SessionStore(tmp_path).load("missing")


def test_update_bumps_timestamp_monotonically(tmp_path):
    store = SessionStore(tmp_path)
    store.create(_session())
    stamps = []
    for i in range(5):
        s = store.update("S1", lambda s: setattr(s, "seed", i))
        stamps.append(s.updated_at)
    assert stamps == sorted(stamps)
    assert len(set(stamps)) == len(stamps)
    assert store.load("S1").created_at <= stamps[0]


def test_concurrent_updates_serialize_without_tearing(tmp_path):
    store = SessionStore(tmp_path)
    store.create(_session())

    def bump_seed():
        for _ in range(50):
            store.update("S1", lambda s: setattr(s, "seed", s.seed + 1))

    def set_alpha():
        for i in range(50):
            store.update("S1", lambda s: setattr(s, "alpha", (i % 10) / 10))

    threads = [threading.Thread(target=bump_seed), threading.Thread(target=set_alpha)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    final = store.load("S1")
    assert final.seed == 50  # every increment observed: writers serialized
    raw = json.loads((tmp_path / "S1.json").read_text())
    assert set(raw) == set(final.as_dict())  # no torn file


def test_updates_to_distinct_sessions_do_not_block(tmp_path):
    store = SessionStore(tmp_path)
    store.create(_session("A"))
    store.create(_session("B"))
    store.update("A", lambda s: setattr(s, "seed", 1))
    store.update("B", lambda s: setattr(s, "seed", 2))
    assert store.load("A").seed == 1
    assert store.load("B").seed == 2
