from __future__ import annotations

from datetime import datetime

import pytest

from forumextract.dom import NodePath, resolve
from forumextract.errors import MetadataNotFound
from forumextract.metadata import (
    EPOCH_FLOOR,
    extract_dates,
    extract_post_links,
    extract_users,
)

from conftest import parse

URL = "http://forum.example.org/thread/9"
NOW = datetime(2022, 1, 1)


def posts_doc(fragments, url=URL, extra_body=""):
    posts = "".join(f'<div class="post">{f}</div>' for f in fragments)
    html = (f'<html><body><div class="t">{posts}</div>{extra_body}'
            "</body></html>")
    doc = parse(html, url)
    nodes = resolve(doc, NodePath.parse("/html/body/div/div"))
    assert len(nodes) == len(fragments)
    return doc, nodes


class TestDates:
    def test_time_elements_ascending(self):
        frags = [
            f'<time datetime="2020-03-0{i}T10:00:00">day {i}</time><p>body {i}</p>'
            for i in range(1, 6)
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_dates(doc, nodes, NOW)
        assert winner.source == "datetime_attribute"
        assert winner.anchor == "self"
        assert winner.aligned == tuple(
            datetime(2020, 3, i, 10, 0) for i in range(1, 6))

    def test_monotonic_candidate_beats_shuffled(self):
        ascending = ["2020-01-01", "2020-02-01", "2020-03-01", "2020-04-01"]
        shuffled = ["2021-03-01", "2021-01-01", "2021-04-01", "2021-02-01"]
        frags = [
            f'<span class="a">{a}</span><span class="b">{s}</span><p>b{i}</p>'
            for i, (a, s) in enumerate(zip(ascending, shuffled))
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_dates(doc, nodes, NOW)
        # the shuffled candidate is more recent but not chronological
        assert str(winner.xpath) == "./span[1]"
        assert winner.aligned[0] == datetime(2020, 1, 1)

    def test_descending_counts_as_monotonic(self):
        dates = ["2020-04-01", "2020-03-01", "2020-02-01", "2020-01-01"]
        frags = [f"<span>{d}</span><p>x{i}</p>" for i, d in enumerate(dates)]
        doc, nodes = posts_doc(frags)
        winner = extract_dates(doc, nodes, NOW)
        assert winner.dates == tuple(
            datetime(2020, m, 1) for m in (4, 3, 2, 1))

    def test_recentness_breaks_monotonic_ties(self):
        older = ["2019-01-01", "2019-02-01", "2019-03-01", "2019-04-01"]
        newer = ["2021-01-01", "2021-02-01", "2021-03-01", "2021-04-01"]
        frags = [
            f'<span class="o">{o}</span><em></em><span class="n">{n}</span><p>t{i}</p>'
            for i, (o, n) in enumerate(zip(older, newer))
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_dates(doc, nodes, NOW)
        assert winner.aligned[-1] == datetime(2021, 4, 1)

    def test_pre_epoch_date_filtered_but_candidate_survives_window(self):
        dates = ["1980-01-01", "2020-02-01", "2020-03-01", "2020-04-01",
                 "2020-05-01"]
        frags = [f"<span>{d}</span><p>y{i}</p>" for i, d in enumerate(dates)]
        doc, nodes = posts_doc(frags)
        winner = extract_dates(doc, nodes, NOW)
        assert winner.aligned[0] is None
        assert all(d is not None for d in winner.aligned[1:])
        assert all(d >= EPOCH_FLOOR for d in winner.dates)

    def test_candidate_dropped_when_too_many_slots_filtered(self):
        # 3 of 5 dates pre-epoch: coverage 2 < n-2, nothing else to pick
        dates = ["1980-01-01", "1981-01-01", "1982-01-01", "2020-04-01",
                 "2020-05-01"]
        frags = [f"<span>{d}</span><p>z{i}</p>" for i, d in enumerate(dates)]
        doc, nodes = posts_doc(frags)
        with pytest.raises(MetadataNotFound):
            extract_dates(doc, nodes, NOW)

    def test_future_dates_filtered_by_now(self):
        frags = [
            '<span>2020-01-01</span><p>a</p>',
            '<span>2020-02-01</span><p>b</p>',
            '<span>2020-03-01</span><p>c</p>',
            '<span>2030-01-01</span><p>d</p>',
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_dates(doc, nodes, now=datetime(2021, 1, 1))
        assert winner.aligned[3] is None
        assert len(winner.dates) == 3

    def test_dates_in_preceding_sibling_rows(self):
        rows = []
        for i in range(1, 6):
            rows.append(f'<div class="stamp">0{i}.06.2020 08:1{i}</div>')
            rows.append(f'<article><p>post body number {i}</p></article>')
        html = f"<html><body><div>{''.join(rows)}</div></body></html>"
        doc = parse(html, URL)
        nodes = resolve(doc, NodePath.parse("/html/body/div/article"))
        assert len(nodes) == 5
        winner = extract_dates(doc, nodes, NOW)
        assert winner.anchor == "prev"
        assert winner.aligned == tuple(
            datetime(2020, 6, i, 8, 10 + i) for i in range(1, 6))

    def test_no_candidates_raises(self):
        doc, nodes = posts_doc([f"<p>text {i}</p>" for i in range(4)])
        with pytest.raises(MetadataNotFound):
            extract_dates(doc, nodes, NOW)

    def test_scripts_not_scanned_for_dates(self):
        frags = [
            f'<script>var d="2020-01-0{i}";</script><p>body {i}</p>'
            for i in range(1, 5)
        ]
        doc, nodes = posts_doc(frags)
        with pytest.raises(MetadataNotFound):
            extract_dates(doc, nodes, NOW)


class TestLinks:
    def test_fragment_permalinks_increasing(self):
        frags = [
            f'<a href="#post-10{i}">#{i}</a><p>body {i}</p>'
            for i in range(1, 6)
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_post_links(doc, nodes, URL)
        assert winner.kind == "href"
        assert winner.urls == tuple(
            f"{URL}#post-10{i}" for i in range(1, 6))
        assert winner.trailing_numbers == (101, 102, 103, 104, 105)

    def test_external_domain_excluded(self):
        frags = [
            f'<a href="http://elsewhere.example/x{i}">x</a>'
            f'<a href="#p{i}">#</a><p>b{i}</p>'
            for i in range(1, 5)
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_post_links(doc, nodes, URL)
        assert all(u.startswith(URL) for u in winner.urls)

    def test_monotonic_candidate_beats_shuffled(self):
        increasing = [101, 102, 103, 104]
        shuffled = [7, 3, 9, 1]
        frags = [
            f'<a class="good" href="{URL}#m{a}">l</a>'
            f'<a class="bad" href="{URL}?jump={b}">j</a><p>t</p>'
            for a, b in zip(increasing, shuffled)
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_post_links(doc, nodes, URL)
        assert winner.trailing_numbers == (101, 102, 103, 104)

    def test_anchor_name_attributes(self):
        frags = [
            f'<a name="p84{i}"></a><p>row {i}</p>' for i in range(1, 6)
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_post_links(doc, nodes, URL)
        assert winner.kind == "anchor_name"
        assert winner.urls[0] == f"{URL}#p841"
        assert winner.trailing_numbers == (841, 842, 843, 844, 845)

    def test_candidate_must_cover_every_post(self):
        frags = ['<a href="#only-1">x</a><p>a</p>', "<p>b</p>", "<p>c</p>",
                 "<p>d</p>"]
        doc, nodes = posts_doc(frags)
        with pytest.raises(MetadataNotFound):
            extract_post_links(doc, nodes, URL)

    def test_page_url_prefix_includes_subpaths(self):
        frags = [
            f'<a href="{URL}/post-{i}">p</a><p>c{i}</p>' for i in range(1, 5)
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_post_links(doc, nodes, URL)
        assert winner.trailing_numbers == (1, 2, 3, 4)


class TestUsers:
    def test_user_class_span_beats_plain_bold(self):
        names = ["alice", "bob", "carol", "dave"]
        frags = [
            f'<span class="username">{n}</span><b>Re:</b><p>body of {n}</p>'
            for n in names
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_users(doc, nodes)
        assert winner.names == tuple(names)
        assert not winner.is_link

    def test_single_candidate_same_author_still_returned(self):
        frags = ['<span class="user">sam</span><p>first</p>',
                 '<span class="user">sam</span><p>second</p>',
                 '<span class="user">sam</span><p>third</p>',
                 '<span class="user">sam</span><p>fourth</p>']
        doc, nodes = posts_doc(frags)
        winner = extract_users(doc, nodes)
        assert winner.names == ("sam",) * 4

    def test_link_beats_text_with_equal_class_bonus(self):
        names = ["erin", "frank", "grace", "heidi"]
        frags = [
            f'<a class="user-link" href="#profile">{n}</a>'
            f'<span class="user-name">{n}</span><p>text by {n}</p>'
            for n in names
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_users(doc, nodes)
        assert winner.is_link

    def test_profile_links_on_same_host_qualify(self):
        names = ["ivy", "judy", "kiki", "lars"]
        frags = [
            f'<a class="author" href="/members/{n}">{n}</a><p>post {n}</p>'
            for n in names
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_users(doc, nodes)
        assert winner.names == tuple(names)
        assert winner.is_link

    def test_profile_links_can_be_disabled(self):
        frags = [
            f'<a class="author" href="/members/u{i}">user{i}</a><p>p{i}</p>'
            for i in range(4)
        ]
        doc, nodes = posts_doc(frags)
        with pytest.raises(MetadataNotFound):
            extract_users(doc, nodes, allow_profile_links=False)

    def test_offsite_links_never_qualify(self):
        frags = [
            f'<a href="http://spam.example/u{i}">user{i}</a><p>p{i}</p>'
            for i in range(4)
        ]
        doc, nodes = posts_doc(frags)
        with pytest.raises(MetadataNotFound):
            extract_users(doc, nodes)

    def test_name_caps_reject_long_values(self):
        long_name = "x" * 120
        frags = [
            f'<span class="user">{long_name}</span><p>a{i}</p>'
            for i in range(4)
        ]
        doc, nodes = posts_doc(frags)
        with pytest.raises(MetadataNotFound):
            extract_users(doc, nodes)

    def test_name_caps_reject_four_word_values(self):
        frags = [
            f'<span class="user">one two three four</span><p>b{i}</p>'
            for i in range(4)
        ]
        doc, nodes = posts_doc(frags)
        with pytest.raises(MetadataNotFound):
            extract_users(doc, nodes)

    def test_three_word_names_allowed(self):
        frags = [
            f'<span class="user">Dr. Jane Doe{i}</span><p>c{i}</p>'
            for i in range(4)
        ]
        doc, nodes = posts_doc(frags)
        winner = extract_users(doc, nodes)
        assert winner.names[0] == "Dr. Jane Doe0"

    def test_post_link_excluded_from_user_candidates(self):
        frags = [
            f'<a class="permalink" href="#post-{i}">#{i}</a>'
            f'<b>member{i}</b><p>body {i}</p>'
            for i in range(1, 5)
        ]
        doc, nodes = posts_doc(frags)
        link_winner = extract_post_links(doc, nodes, URL)
        winner = extract_users(doc, nodes, link_winner.xpath)
        assert winner.names == tuple(f"member{i}" for i in range(1, 5))

    def test_alignment_follows_post_order(self):
        names = ["n1", "n2", "n3", "n4", "n5"]
        frags = [f'<span class="user">{n}</span><p>t {n}</p>' for n in names]
        doc, nodes = posts_doc(frags)
        winner = extract_users(doc, nodes)
        assert list(winner.names) == names
