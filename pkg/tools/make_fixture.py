"""Regenerate the bundled annual-indicator fixture CSV.

The table is kept here in year-major form (one row per year, columns in
E1..T5 order) for line-by-line proofreading; the emitted CSV is
indicator-major (one row per code) as the wide parser expects.
"""

from pathlib import Path

CODES = [
    "E1", "E2", "E3",
    "ED1", "ED2", "ED3", "ED4",
    "S1", "S2", "S3",
    "T1", "T2", "T3", "T4", "T5",
]

# year: E1 E2 E3 ED1 ED2 ED3 ED4 S1 S2 S3 T1 T2 T3 T4 T5
ROWS = """
1991 23.9 4.4 9.0 97.9 51.5 13.7 - 65.3 5.1 - - 0.3 - - -
1992 25.5 4.7 7.6 97.3 52.7 14.0 - 65.5 5.3 - - 0.4 - - -
1993 26.0 4.7 7.1 97.4 54.0 14.4 - 65.7 5.6 - - 0.6 - - -
1994 27.9 4.9 10.2 97.6 54.7 15.0 - 66.0 5.8 - - 1.0 - - -
1995 31.2 5.4 9.1 97.6 55.3 15.6 - 66.2 5.9 - - 1.6 - - -
1996 31.9 5.5 6.5 97.2 56.1 16.3 - 66.5 6.0 - - 2.5 - - -
1997 31.8 5.4 5.6 97.5 56.9 17.0 - 66.8 6.0 - - 3.7 - - -
1998 31.7 5.3 5.1 97.7 57.3 17.5 - 67.1 6.2 - - 5.3 - - -
1999 32.8 5.4 3.0 98.4 57.7 18.4 4.1 67.3 6.3 - - 8.1 - - -
2000 33.9 5.5 3.4 98.9 58.5 19.0 3.9 67.6 6.1 - - 12.1 - - 15.1
2001 33.7 5.4 3.8 100.3 60.3 20.2 4.0 67.9 6.2 13.0 - 15.4 - - 14.6
2002 35.0 5.5 2.9 100.3 62.0 21.5 4.0 68.2 6.4 13.0 - 18.8 - - 14.8
2003 39.2 6.1 3.0 101.9 62.8 22.6 4.2 68.5 6.5 12.9 - 22.3 - - 14.9
2004 44.2 6.8 3.5 102.6 63.8 23.6 4.1 68.8 6.3 12.6 - 26.0 - - 15.2
2005 47.8 7.3 4.1 102.9 64.8 24.3 4.1 69.1 6.2 12.0 15.6 33.9 3.4 - 14.3
2006 51.9 7.8 4.3 103.3 65.5 25.4 4.2 69.5 6.0 11.2 17.2 41.7 4.3 - 14.2
2007 58.4 8.7 4.8 104.0 67.3 26.4 4.1 69.8 5.8 10.3 20.2 50.6 5.2 - 13.1
2008 64.2 9.4 8.9 104.2 68.8 27.4 4.3 70.0 5.8 9.6 22.8 59.7 6.1 - 12.2
2009 60.9 8.8 2.9 103.9 70.0 28.4 4.5 70.4 6.4 9.1 25.3 68.0 6.9 - 13.1
2010 66.7 9.5 3.3 103.7 71.6 29.7 4.1 70.7 6.3 8.7 28.4 76.6 7.6 185.2 12.9
2011 74.2 10.5 4.8 103.7 72.9 31.4 4.1 71.0 6.2 8.3 30.9 84.2 8.6 236.1 11.6
2012 75.9 10.6 3.7 103.8 73.5 32.5 4.2 71.3 6.2 8.0 33.3 88.5 9.2 321.0 11.5
2013 78.1 10.7 2.7 103.9 74.9 33.4 4.3 71.5 6.1 7.7 35.3 93.1 9.7 365.9 11.3
2014 80.2 10.9 2.4 102.6 75.7 35.9 4.3 71.8 6.0 7.6 37.4 96.7 10.1 444.4 11.4
2015 75.7 10.2 1.4 102.0 75.7 37.0 4.2 72.0 6.0 7.5 39.8 96.1 11.3 565.5 11.9
2016 77.0 10.2 1.6 103.1 75.8 37.5 4.2 72.2 6.0 7.5 42.8 99.3 12.2 1249.8 12.1
2017 82.0 10.8 2.3 102.7 75.5 37.9 4.2 72.4 5.9 7.3 45.2 101.4 13.5 3470.1 12.3
2018 87.2 11.3 2.4 100.1 76.0 38.3 4.1 72.6 5.8 7.3 48.5 103.1 14.0 6087.1 12.5
2019 88.5 11.4 2.2 100.2 76.3 39.1 4.1 72.9 5.6 7.8 52.9 105.9 14.7 9854.2 12.5
2020 86.1 11.0 1.9 100.7 76.8 40.1 4.4 72.2 6.6 8.3 58.6 104.9 15.6 11366.7 13.4
2021 98.4 12.4 3.5 100.5 77.5 41.4 4.2 71.2 6.1 8.9 61.7 106.7 16.8 12808.2 13.2
2022 102.4 12.8 7.9 101.7 77.6 42.4 3.8 73.0 5.3 9.1 63.7 108.1 17.7 14527.7 11.9
2023 107.0 13.3 5.9 101.8 77.1 43.3 - 73.3 4.9 - 65.4 109.4 18.6 15466.2 -
"""


def main() -> None:
    years = []
    by_code = {c: [] for c in CODES}
    for line in ROWS.strip().splitlines():
        fields = line.split()
        assert len(fields) == 1 + len(CODES), line
        years.append(fields[0])
        for code, cell in zip(CODES, fields[1:]):
            by_code[code].append(cell)

    assert years == [str(y) for y in range(1991, 2024)]

    out = Path(__file__).resolve().parents[1] / "src" / "paneldep" / "data" / "table_wdi.csv"
    lines = ["code,region," + ",".join(years)]
    for code in CODES:
        lines.append(f"{code},global," + ",".join(by_code[code]))
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({len(CODES)} series x {len(years)} years)")


if __name__ == "__main__":
    main()
