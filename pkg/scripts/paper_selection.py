"""Write data/paper/selection.csv: the 60 banks (asset rank K_a, group n_g) and 195 countries.

Labels are English Wikipedia article titles as of 2017.
"""
import csv
import sys

# (article title, country code, group, asset rank)
BANKS = [
    ("Goldman Sachs", "US", 1, 35), ("Citigroup", "US", 1, 13), ("Bank of America", "US", 1, 9),
    ("HSBC", "UK", 2, 7), ("JPMorgan Chase", "US", 1, 6), ("Barclays", "UK", 2, 18),
    ("Deutsche Bank", "DE", 3, 15), ("Morgan Stanley", "US", 1, 38), ("UBS", "CH", 2, 34),
    ("Wells Fargo", "US", 1, 11), ("Credit Suisse", "CH", 2, 40), ("BNP Paribas", "FR", 3, 8),
    ("Royal Bank of Canada", "CA", 1, 24), ("Société Générale", "FR", 3, 19),
    ("Standard Chartered", "UK", 2, 48), ("ING Group", "NL", 3, 26),
    ("Bank of Montreal", "CA", 1, 52), ("UniCredit", "IT", 3, 28), ("Scotiabank", "CA", 1, 42),
    ("State Bank of India", "IN", 4, 55), ("Commonwealth Bank", "AU", 4, 43),
    ("Banco Santander", "ES", 3, 16), ("Crédit Agricole", "FR", 3, 10),
    ("National Australia Bank", "AU", 4, 50), ("Westpac", "AU", 4, 47),
    ("Australia and New Zealand Banking Group", "AU", 4, 45),
    ("Lloyds Banking Group", "UK", 2, 23), ("Industrial and Commercial Bank of China", "CN", 5, 1),
    ("Nordea", "FI", 3, 46), ("Mitsubishi UFJ Financial Group", "JP", 4, 5),
    ("Banco Bilbao Vizcaya Argentaria", "ES", 3, 41), ("Bank of China", "CN", 5, 4),
    ("Toronto-Dominion Bank", "CA", 1, 25), ("Canadian Imperial Bank of Commerce", "CA", 1, 59),
    ("Royal Bank of Scotland Group", "UK", 2, 29), ("Mizuho Financial Group", "JP", 4, 17),
    ("Rabobank", "NL", 3, 44), ("Commerzbank", "DE", 3, 54), ("Intesa Sanpaolo", "IT", 3, 32),
    ("China Construction Bank", "CN", 5, 2), ("Agricultural Bank of China", "CN", 5, 3),
    ("Danske Bank", "DK", 3, 53), ("Sumitomo Mitsui Financial Group", "JP", 4, 14),
    ("Groupe BPCE", "FR", 3, 20), ("Cassa Depositi e Prestiti", "IT", 3, 57),
    ("DZ Bank", "DE", 3, 51), ("Bank of Communications", "CN", 5, 21),
    ("Resona Holdings", "JP", 4, 56), ("Sumitomo Mitsui Trust Holdings", "JP", 4, 60),
    ("Crédit Mutuel", "FR", 3, 39), ("China Merchants Bank", "CN", 5, 31),
    ("China Minsheng Bank", "CN", 5, 36), ("Japan Post Bank", "JP", 4, 12),
    ("Norinchukin Bank", "JP", 4, 27), ("Ping An Bank", "CN", 5, 58),
    ("China CITIC Bank", "CN", 5, 37), ("Shanghai Pudong Development Bank", "CN", 5, 33),
    ("Industrial Bank (China)", "CN", 5, 30), ("Postal Savings Bank of China", "CN", 5, 22),
    ("China Everbright Bank", "CN", 5, 49),
]

COUNTRIES = """Afghanistan AF|Albania AL|Algeria DZ|Andorra AD|Angola AO|Antigua and Barbuda AG|
Argentina AR|Armenia AM|Australia AU|Austria AT|Azerbaijan AZ|The Bahamas BS|Bahrain BH|
Bangladesh BD|Barbados BB|Belarus BY|Belgium BE|Belize BZ|Benin BJ|Bhutan BT|Bolivia BO|
Bosnia and Herzegovina BA|Botswana BW|Brazil BR|Brunei BN|Bulgaria BG|Burkina Faso BF|
Burundi BI|Cambodia KH|Cameroon CM|Canada CA|Cape Verde CV|Central African Republic CF|Chad TD|
Chile CL|China CN|Colombia CO|Comoros KM|Republic of the Congo CG|
Democratic Republic of the Congo CD|Costa Rica CR|Ivory Coast CI|Croatia HR|Cuba CU|Cyprus CY|
Czech Republic CZ|Denmark DK|Djibouti DJ|Dominica DM|Dominican Republic DO|East Timor TL|
Ecuador EC|Egypt EG|El Salvador SV|Equatorial Guinea GQ|Eritrea ER|Estonia EE|Ethiopia ET|Fiji FJ|
Finland FI|France FR|Gabon GA|The Gambia GM|Georgia (country) GE|Germany DE|Ghana GH|Greece GR|
Grenada GD|Guatemala GT|Guinea GN|Guinea-Bissau GW|Guyana GY|Haiti HT|Honduras HN|Hungary HU|
Iceland IS|India IN|Indonesia ID|Iran IR|Iraq IQ|Republic of Ireland IE|Israel IL|Italy IT|
Jamaica JM|Japan JP|Jordan JO|Kazakhstan KZ|Kenya KE|Kiribati KI|North Korea KP|South Korea KR|
Kuwait KW|Kyrgyzstan KG|Laos LA|Latvia LV|Lebanon LB|Lesotho LS|Liberia LR|Libya LY|
Liechtenstein LI|Lithuania LT|Luxembourg LU|Republic of Macedonia MK|Madagascar MG|Malawi MW|
Malaysia MY|Maldives MV|Mali ML|Malta MT|Marshall Islands MH|Mauritania MR|Mauritius MU|Mexico MX|
Federated States of Micronesia FM|Moldova MD|Monaco MC|Mongolia MN|Montenegro ME|Morocco MA|
Mozambique MZ|Myanmar MM|Namibia NA|Nauru NR|Nepal NP|Netherlands NL|New Zealand NZ|Nicaragua NI|
Niger NE|Nigeria NG|Norway NO|Oman OM|Pakistan PK|Palau PW|State of Palestine PS|Panama PA|
Papua New Guinea PG|Paraguay PY|Peru PE|Philippines PH|Poland PL|Portugal PT|Qatar QA|Romania RO|
Russia RU|Rwanda RW|Saint Kitts and Nevis KN|Saint Lucia LC|Saint Vincent and the Grenadines VC|
Samoa WS|San Marino SM|São Tomé and Príncipe ST|Saudi Arabia SA|Senegal SN|Serbia RS|
Seychelles SC|Sierra Leone SL|Singapore SG|Slovakia SK|Slovenia SI|Solomon Islands SB|Somalia SO|
South Africa ZA|South Sudan SS|Spain ES|Sri Lanka LK|Sudan SD|Suriname SR|Swaziland SZ|Sweden SE|
Switzerland CH|Syria SY|Tajikistan TJ|Tanzania TZ|Thailand TH|Togo TG|Tonga TO|
Trinidad and Tobago TT|Tunisia TN|Turkey TR|Turkmenistan TM|Tuvalu TV|Uganda UG|Ukraine UA|
United Arab Emirates AE|United Kingdom UK|United States US|Uruguay UY|Uzbekistan UZ|Vanuatu VU|
Vatican City VA|Venezuela VE|Vietnam VN|Yemen YE|Zambia ZM|Zimbabwe ZW"""


def countries():
    out = []
    for item in COUNTRIES.replace("\n", "").split("|"):
        name, code = item.strip().rsplit(" ", 1)
        out.append((name, code))
    return out


def main(path="data/paper/selection.csv"):
    rows = countries()
    assert len(BANKS) == 60, len(BANKS)
    assert len(rows) == 195, len(rows)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_label", "category", "group", "external_rank", "code"])
        for name, code, group, ka in BANKS:
            w.writerow([name, "bank", group, ka, code])
        for name, code in rows:
            w.writerow([name, "country", 0, "", code])


if __name__ == "__main__":
    main(*sys.argv[1:])
