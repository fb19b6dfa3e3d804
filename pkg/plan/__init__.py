# Plans: timelines, independent validation, coverage scoring, failure audits
