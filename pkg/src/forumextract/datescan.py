"""Recognition of date/time mentions in attribute values and free text.

Supported shapes, tried in this order (first pattern with a valid match
wins, leftmost occurrence first):

=====================  ==========================================
shape                  examples
=====================  ==========================================
ISO-8601               2021-05-30, 2021-05-30T18:05:00+02:00,
                       2020-03-04 10:11:22Z
month-first textual    March 5, 2021 at 10:12, Apr 2 2021 9:14 AM
day-first textual      4 March 2021, 3. März 2020, 14:12 Uhr,
                       12. Okt. 2019
dotted numeric (DMY)   12.03.2019, 14:22
slashed numeric (MDY)  07/14/2022 9:05 PM
=====================  ==========================================

Month names cover English and German, full and abbreviated. An optional
time of day (``at``/``um``/comma separated, 24h or am/pm, trailing ``Uhr``
ignored) may follow any shape. Timezone offsets are honored by converting
to UTC; all returned datetimes are naive (zone-less), so values from pages
in the same frame of reference compare directly.
"""

from __future__ import annotations

import re
from datetime import datetime, timedelta, timezone

__all__ = ["find_date", "parse_datetime_value", "parse_iso8601"]

_EN_MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4, "may": 5, "june": 6,
    "july": 7, "august": 8, "september": 9, "october": 10, "november": 11,
    "december": 12,
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7, "aug": 8,
    "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12,
}

_DE_MONTHS = {
    "januar": 1, "februar": 2, "märz": 3, "maerz": 3, "april": 4, "mai": 5,
    "juni": 6, "juli": 7, "august": 8, "september": 9, "oktober": 10,
    "november": 11, "dezember": 12,
    "jän": 1, "mär": 3, "maer": 3, "okt": 10, "dez": 12,
}

_MONTHS: dict[str, int] = {**_EN_MONTHS, **_DE_MONTHS}

_MONTH_ALT = "|".join(sorted(_MONTHS, key=len, reverse=True))

_TIME_SUFFIX = (
    r"(?:[,\s]+(?:at\s+|um\s+)?(?P<h>\d{1,2}):(?P<mi>\d{2})(?::(?P<s>\d{2}))?"
    r"(?:\s*(?P<ampm>[ap])\.?m\.?)?(?:\s+uhr)?)?"
)

_PATTERNS: list[re.Pattern[str]] = [
    # ISO-8601 with optional time and zone
    re.compile(
        r"(?<!\d)(?P<y>\d{4})-(?P<m>\d{2})-(?P<d>\d{2})"
        r"(?:[T ](?P<h>\d{2}):(?P<mi>\d{2})(?::(?P<s>\d{2})(?:\.\d+)?)?"
        r"(?P<tz>Z|[+-]\d{2}:?\d{2})?)?(?!\d)",
        re.IGNORECASE,
    ),
    # March 5, 2021 / Apr 2 2021 ...
    re.compile(
        rf"\b(?P<mon>{_MONTH_ALT})\.?\s+(?P<d>\d{{1,2}})(?:st|nd|rd|th)?"
        rf"(?:,\s*|\s+)(?P<y>\d{{4}})(?!\d){_TIME_SUFFIX}",
        re.IGNORECASE,
    ),
    # 4 March 2021 / 3. März 2020 ...
    re.compile(
        rf"(?<!\d)(?P<d>\d{{1,2}})(?:st|nd|rd|th)?\.?\s+(?P<mon>{_MONTH_ALT})"
        rf"\.?,?\s+(?P<y>\d{{4}})(?!\d){_TIME_SUFFIX}",
        re.IGNORECASE,
    ),
    # 12.03.2019 (day.month.year)
    re.compile(
        rf"(?<!\d)(?P<d>\d{{1,2}})\.(?P<m>\d{{1,2}})\.(?P<y>\d{{4}})(?!\d)"
        rf"{_TIME_SUFFIX}",
        re.IGNORECASE,
    ),
    # 07/14/2022 (month/day/year)
    re.compile(
        rf"(?<!\d)(?P<m>\d{{1,2}})/(?P<d>\d{{1,2}})/(?P<y>\d{{4}})(?!\d)"
        rf"{_TIME_SUFFIX}",
        re.IGNORECASE,
    ),
]


def _build(match: re.Match[str]) -> datetime | None:
    groups = match.groupdict()
    try:
        if groups.get("mon"):
            month = _MONTHS[groups["mon"].lower()]
        else:
            month = int(groups["m"])
        day = int(groups["d"])
        year = int(groups["y"])
        hour = int(groups["h"]) if groups.get("h") else 0
        minute = int(groups["mi"]) if groups.get("mi") else 0
        second = int(groups["s"]) if groups.get("s") else 0
        ampm = groups.get("ampm")
        if ampm:
            if hour > 12:
                return None
            hour = hour % 12 + (12 if ampm.lower() == "p" else 0)
        value = datetime(year, month, day, hour, minute, second)
    except (KeyError, ValueError):
        return None
    tz = groups.get("tz")
    if tz:
        value = value - _tz_offset(tz)
    return value


def _tz_offset(tz: str) -> timedelta:
    if tz.upper() == "Z":
        return timedelta(0)
    sign = 1 if tz[0] == "+" else -1
    digits = tz[1:].replace(":", "")
    hours, minutes = int(digits[:2]), int(digits[2:4])
    return sign * timedelta(hours=hours, minutes=minutes)


def find_date(text: str) -> datetime | None:
    """First recognized date in ``text``, or None.

    Patterns are tried in the documented priority order; within a pattern
    the leftmost match that forms a valid calendar date wins.
    """
    if not text:
        return None
    for pattern in _PATTERNS:
        for match in pattern.finditer(text):
            value = _build(match)
            if value is not None:
                return value
    return None


def parse_datetime_value(raw: str) -> datetime | None:
    """Parse a machine-oriented value such as a ``datetime`` attribute."""
    return find_date(raw.strip())


def parse_iso8601(raw: str) -> datetime:
    """Strictly parse an ISO-8601 string (gold annotations); aware values
    are converted to UTC and returned naive."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    value = datetime.fromisoformat(text)
    if value.tzinfo is not None:
        value = value.astimezone(timezone.utc).replace(tzinfo=None)
    return value
