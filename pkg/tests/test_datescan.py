from __future__ import annotations

from datetime import datetime

import pytest

from forumextract.datescan import find_date, parse_datetime_value, parse_iso8601


class TestIso:
    def test_date_only(self):
        assert find_date("2021-05-30") == datetime(2021, 5, 30)

    def test_datetime_with_seconds(self):
        assert find_date("posted 2020-03-04 10:11:22 by x") == \
            datetime(2020, 3, 4, 10, 11, 22)

    def test_t_separator_and_offset_normalizes_to_utc(self):
        assert find_date("2021-05-30T18:05:00+02:00") == \
            datetime(2021, 5, 30, 16, 5, 0)

    def test_zulu_suffix(self):
        assert find_date("2020-01-01T00:30:00Z") == \
            datetime(2020, 1, 1, 0, 30)

    def test_negative_offset(self):
        assert find_date("2020-06-01T08:00:00-0500") == \
            datetime(2020, 6, 1, 13, 0)


class TestEnglish:
    def test_month_first_with_time(self):
        assert find_date("March 5, 2021 at 10:12") == \
            datetime(2021, 3, 5, 10, 12)

    def test_abbreviated_month_and_am_pm(self):
        assert find_date("Apr 2, 2021 at 9:14 AM") == \
            datetime(2021, 4, 2, 9, 14)
        assert find_date("Apr 2, 2021 at 9:14 PM") == \
            datetime(2021, 4, 2, 21, 14)

    def test_noon_and_midnight(self):
        assert find_date("Jan 1, 2020 12:00 pm") == datetime(2020, 1, 1, 12, 0)
        assert find_date("Jan 1, 2020 12:00 am") == datetime(2020, 1, 1, 0, 0)

    def test_day_first(self):
        assert find_date("4 March 2021") == datetime(2021, 3, 4)

    def test_ordinal_suffix(self):
        assert find_date("March 4th, 2021") == datetime(2021, 3, 4)

    def test_embedded_in_sentence(self):
        assert find_date("Joined September 12, 2019, loves hiking") == \
            datetime(2019, 9, 12)


class TestGerman:
    def test_day_dot_month_name(self):
        assert find_date("3. März 2020, 14:12 Uhr") == \
            datetime(2020, 3, 3, 14, 12)

    def test_ascii_spelling(self):
        assert find_date("3. Maerz 2020") == datetime(2020, 3, 3)

    def test_abbreviated(self):
        assert find_date("12. Okt. 2019") == datetime(2019, 10, 12)

    def test_um_prefix_for_time(self):
        assert find_date("1. Dezember 2018 um 09:05") == \
            datetime(2018, 12, 1, 9, 5)


class TestNumeric:
    def test_dotted_is_day_first(self):
        assert find_date("Verfasst: 12.03.2019, 14:22") == \
            datetime(2019, 3, 12, 14, 22)

    def test_slashed_is_month_first(self):
        assert find_date("07/14/2022 9:05 PM") == \
            datetime(2022, 7, 14, 21, 5)

    def test_single_digit_components(self):
        assert find_date("4.3.2020") == datetime(2020, 3, 4)

    def test_invalid_calendar_date_skipped(self):
        assert find_date("31.02.2020") is None
        assert find_date("13/45/2020") is None

    def test_no_partial_digit_runs(self):
        assert find_date("build 123.456.7890 ok") is None


class TestNonDates:
    def test_plain_text(self):
        assert find_date("hello world") is None

    def test_empty(self):
        assert find_date("") is None

    def test_month_without_day_or_year(self):
        assert find_date("in March we met") is None
        assert find_date("March 2020") is None

    def test_relative_phrases_unsupported(self):
        assert find_date("gestern") is None
        assert find_date("yesterday at 10:00") is None

    def test_spelled_out_day_of_month_unsupported(self):
        assert find_date("posted the 4th of July 2020") is None


class TestAttributeValues:
    def test_iso_attribute(self):
        assert parse_datetime_value(" 2021-04-02T09:14:00 ") == \
            datetime(2021, 4, 2, 9, 14)

    def test_garbage_attribute(self):
        assert parse_datetime_value("not a date") is None


class TestParseIso8601:
    def test_naive_passthrough(self):
        assert parse_iso8601("2021-05-30T18:05:00") == \
            datetime(2021, 5, 30, 18, 5)

    def test_aware_converts_to_naive_utc(self):
        assert parse_iso8601("2021-05-30T18:05:00+02:00") == \
            datetime(2021, 5, 30, 16, 5)

    def test_zulu(self):
        assert parse_iso8601("2021-05-30T18:05:00Z") == \
            datetime(2021, 5, 30, 18, 5)

    def test_invalid_raises(self):
        with pytest.raises(ValueError):
            parse_iso8601("30/05/2021")
